//! One-shot righting: half a cycle of the in-phase rolling gait from the
//! inverted orientation, for a range of amplitudes.
//!
//! cargo run --release --example one_shot

use std::f64::consts::PI;

use selfright::kinematics::Morphology;
use selfright::rollmodel::{
    classify_trial, drive_gain, Calibration, EnergyLandscape, PerturbationSpec, RollSimulator,
    RollState, SimMode, Span,
};

fn main() -> anyhow::Result<()> {
    let cal = Calibration::default();
    for (name, morph) in [
        ("limbless", Morphology::limbless()),
        ("legged", Morphology::default()),
    ] {
        let land = EnergyLandscape::new(&morph, 1024)?;
        let sim = RollSimulator::new(morph, &land, cal);
        println!(
            "{name} (steepest landscape slope {:.3} N m)",
            land.max_slope()
        );
        for k in [2, 3, 4, 5, 6, 8] {
            let a = PI * k as f64 / 24.0;
            let gait = morph.gait(a, 0.0);
            let traj = sim.run(
                &gait,
                Span::HalfCycle,
                RollState::inverted(),
                &PerturbationSpec::none(),
                SimMode::Lumped,
            )?;
            let out = classify_trial(&traj);
            println!(
                "  A = {k}pi/24  gain {:.3}  roll {:.4} rad  {}",
                drive_gain(&gait, &morph, &cal),
                traj.total_delta_gamma(),
                if out.self_righted { "righted" } else { "stuck" }
            );
        }
    }
    Ok(())
}
