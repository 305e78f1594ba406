//! Sweeps amplitude and spatial frequency for the limbless and the legged
//! body and prints both behavior diagrams as p_sr tables.
//!
//! cargo run --release --example behavior_diagram [seed]

use std::time::Instant;

use selfright::kinematics::Morphology;
use selfright::sweep::{binariness, run_sweep, BehaviorDiagram, SweepSpec};

fn print(name: &str, d: &BehaviorDiagram) {
    println!("\n{name}: p_sr (rows A in units of pi/24, columns xi)");
    print!("  A\\xi");
    for xi in &d.xis {
        print!(" {xi:>4.1}");
    }
    println!();
    for (a, row) in d.amplitudes.iter().zip(d.p_sr_grid()).rev() {
        print!("{:>6.0}", a / (std::f64::consts::PI / 24.0));
        for p in row {
            print!(" {p:>4.2}");
        }
        println!();
    }
    println!("binariness {:.3}", binariness(d));
}

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map_or(Ok(1), |s| s.parse())?;
    for (name, morph) in [
        ("limbless", Morphology::limbless()),
        ("legged", Morphology::default()),
    ] {
        let spec = SweepSpec {
            seed,
            morphology: morph,
            ..SweepSpec::default()
        };
        let t = Instant::now();
        let d = run_sweep(&spec)?;
        print(name, &d);
        println!("{} cells in {:.2?}", d.cells.len(), t.elapsed());
    }
    Ok(())
}
