//! Prints the joint angles of a two-wave gait over one cycle.
//!
//! cargo run --example gait_table [amplitude_rad] [xi]

use selfright::gait::{joint_vector, phase_lag, Axis};
use selfright::kinematics::{body_wave_height, Morphology};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let amplitude: f64 = args
        .next()
        .map_or(Ok(std::f64::consts::FRAC_PI_4), |s| s.parse())?;
    let xi: f64 = args.next().map_or(Ok(0.6), |s| s.parse())?;

    let morph = Morphology::default();
    let gait = morph.gait(amplitude, xi);
    println!(
        "A = {amplitude:.4} rad, xi = {xi}, phase lag = {:.4} rad, period = {:.3} s",
        phase_lag(&gait),
        gait.period()
    );

    let samples = 8;
    print!("{:>7}", "t");
    for k in 1..morph.num_joints() + 1 {
        print!("{:>8}", format!("j{k}"));
    }
    println!("{:>9}", "height");
    for s in 0..samples {
        let t = gait.period() * s as f64 / samples as f64;
        let q = joint_vector(&gait, t)?;
        print!("{t:>7.3}");
        for k in 1..=q.num_chain_joints() {
            let (axis, angle) = q.chain_joint(k).unwrap();
            let tag = match axis {
                Axis::Lateral => 'l',
                Axis::Vertical => 'v',
            };
            print!("{:>7.3}{tag}", angle);
        }
        println!("{:>9.4}", body_wave_height(&morph, &gait, t)?);
    }
    Ok(())
}
