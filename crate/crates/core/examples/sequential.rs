//! Sequential righting: a travelling wave rolls the body module by module.
//! Prints when each module passes the barrier top, head first.
//!
//! cargo run --release --example sequential [xi]

use std::f64::consts::{FRAC_PI_2, PI};

use selfright::kinematics::Morphology;
use selfright::rollmodel::{
    classify_trial, simulate_roll, Calibration, PerturbationSpec, RollState, SimMode, Span,
};

fn main() -> anyhow::Result<()> {
    let xi: f64 = std::env::args().nth(1).map_or(Ok(0.6), |s| s.parse())?;
    let morph = Morphology::default();
    let gait = morph.gait(PI / 4.0, xi);
    let traj = simulate_roll(
        &gait,
        &morph,
        Span::Cycles(1),
        RollState::inverted(),
        &PerturbationSpec::none(),
        SimMode::Segmented,
        &Calibration::default(),
    )?;
    println!("xi = {xi}, A = pi/4, one cycle, segmented");
    for (k, t) in traj.crossing_times(PI + FRAC_PI_2).iter().enumerate() {
        match t {
            Some(t) => println!("  module {:>2} crosses at t = {t:.3} s", k + 1),
            None => println!("  module {:>2} never crosses", k + 1),
        }
    }
    let out = classify_trial(&traj);
    println!(
        "roll over the cycle {:.3} rad, righted: {}",
        traj.total_delta_gamma(),
        out.self_righted
    );
    Ok(())
}
