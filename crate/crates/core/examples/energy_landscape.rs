//! Roll energy of the body cross-section for a few leg lengths: stable
//! orientations and the barrier the drive has to beat.
//!
//! cargo run --example energy_landscape

use selfright::kinematics::{cross_section, polygon_area, Morphology};
use selfright::rollmodel::{stable_configurations, EnergyLandscape};

fn main() -> anyhow::Result<()> {
    for legs in [0.0, 0.01, 0.05, 0.11] {
        let morph = Morphology::default().with_leg_length(legs);
        let land = EnergyLandscape::new(&morph, 1024)?;
        let minima: Vec<String> = stable_configurations(&land)
            .iter()
            .map(|g| format!("{g:.3}"))
            .collect();
        println!(
            "L = {legs:.2} m: barrier {:.4} J, max slope {:.3} N m, minima [{}], section area {:.5} m^2",
            land.barrier,
            land.max_slope(),
            minima.join(", "),
            polygon_area(&cross_section(&morph, 0.0)),
        );
    }

    let land = EnergyLandscape::new(&Morphology::default(), 1024)?;
    println!("\ngamma   U(gamma) for L = 0.11 m");
    for k in 0..16 {
        let g = std::f64::consts::TAU * k as f64 / 16.0;
        let u = land.energy_at(g);
        let bar = "#".repeat(((u - land.energy[0]) / land.barrier * 40.0).round() as usize);
        println!("{g:5.2}  {u:.4}  {bar}");
    }
    Ok(())
}
