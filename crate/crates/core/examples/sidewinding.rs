//! Lateral displacement of the sidewinding gait against spatial frequency.
//!
//! cargo run --release --example sidewinding

use std::f64::consts::PI;

use selfright::gait::GaitParams;
use selfright::kinematics::Morphology;
use selfright::sidewinding::lateral_displacement;

fn main() -> anyhow::Result<()> {
    let morph = Morphology::default();
    println!("A_l = pi/3, A_v = pi/9");
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>8}",
        "xi", "lateral", "axial", "turn", "contact"
    );
    for k in 0..=12 {
        let xi = k as f64 / 10.0;
        let gait = GaitParams::new(PI / 3.0, xi, morph.num_lateral_joints())
            .with_amplitudes(PI / 3.0, PI / 9.0);
        let r = lateral_displacement(&gait, &morph, 1)?;
        println!(
            "{xi:>5.1} {:>10.4} {:>10.4} {:>10.4} {:>8.3}",
            r.lateral_displacement, r.axial_displacement, r.rotation_per_cycle, r.contact_fraction
        );
    }
    println!("(lengths in body lengths per cycle, turn in rad per cycle)");
    Ok(())
}
