//! Command-line front end. Every subcommand writes its files under the output
//! directory and stamps them with the config hash and seed.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::RunConfig;
use crate::gait::joint_vector;
use crate::provenance::{fmt_f64, Provenance};
use crate::rollmodel::{
    classify_trial, stable_configurations, EnergyLandscape, RollSimulator, RollState, SimMode,
    Span, TrialOutcome,
};
use crate::sidewinding::{lateral_displacement_with, DisplacementReport};
use crate::sweep::{binariness, diagram_csv, diagram_json, run_sweep};

#[derive(Debug, Parser)]
#[command(
    name = "selfright",
    version,
    about = "Self-righting gait simulator and sweep harness"
)]
pub struct Cli {
    /// TOML run configuration; missing keys take defaults.
    #[arg(long, global = true, env = "SELFRIGHT_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, env = "SELFRIGHT_SEED")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, env = "SELFRIGHT_OUT")]
    pub out: Option<PathBuf>,
    /// lumped | segmented
    #[arg(long, global = true, env = "SELFRIGHT_MODE")]
    pub mode: Option<SimMode>,
    /// Leg length in meters (0 for limbless).
    #[arg(long, global = true, env = "SELFRIGHT_LEGS")]
    pub legs: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint-angle table over one gait cycle.
    Gait(GaitArgs),
    /// Roll energy landscape, stable orientations and barrier.
    Energy(EnergyArgs),
    /// One roll trial from the inverted orientation.
    Simulate(SimulateArgs),
    /// Behavior diagram over amplitude and spatial frequency.
    Sweep,
    /// Sidewinding displacement estimate.
    Sidewind(SidewindArgs),
}

#[derive(Debug, Args)]
pub struct GaitArgs {
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub wave: WaveArgs,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    /// Amplitude for both waves (rad).
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Spatial frequency.
    #[arg(long)]
    pub xi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, conflicts_with = "half_cycle")]
    pub cycles: Option<u32>,
    /// Run only `w t` in [0, pi], the one-shot move.
    #[arg(long)]
    pub half_cycle: bool,
    #[command(flatten)]
    pub wave: WaveArgs,
}

#[derive(Debug, Args)]
pub struct SidewindArgs {
    #[arg(long)]
    pub cycles: Option<u32>,
    #[arg(long)]
    pub xi: Option<f64>,
}

/// Loads the config file (if any) and applies flag overrides; flags win.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            RunConfig::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.dir = out.clone();
    }
    if let Some(mode) = cli.mode {
        cfg.mode = mode;
    }
    if let Some(legs) = cli.legs {
        cfg.morphology.leg_length = legs;
    }
    match &cli.command {
        Command::Gait(a) => {
            if let Some(n) = a.samples {
                cfg.gait_table.samples = n;
            }
            apply_wave(&mut cfg, &a.wave);
        }
        Command::Energy(a) => {
            if let Some(r) = a.resolution {
                cfg.energy.resolution = r;
            }
        }
        Command::Simulate(a) => {
            if let Some(c) = a.cycles {
                cfg.simulate.cycles = c;
                cfg.simulate.half_cycle = false;
            }
            if a.half_cycle {
                cfg.simulate.half_cycle = true;
            }
            apply_wave(&mut cfg, &a.wave);
        }
        Command::Sweep => {}
        Command::Sidewind(a) => {
            if let Some(c) = a.cycles {
                cfg.sidewind.cycles = c;
            }
            if let Some(xi) = a.xi {
                cfg.sidewind.gait.spatial_frequency = xi;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply_wave(cfg: &mut RunConfig, w: &WaveArgs) {
    if let Some(a) = w.amplitude {
        cfg.gait.amplitude_lateral = a;
        cfg.gait.amplitude_vertical = a;
    }
    if let Some(xi) = w.xi {
        cfg.gait.spatial_frequency = xi;
    }
}

/// Runs one parsed command and returns the files it wrote.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let cfg = resolve_config(cli)?;
    let prov = cfg.provenance()?;
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut write = |name: &str, body: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
        Ok(())
    };
    match &cli.command {
        Command::Gait(_) => write("gait.csv", gait_table(&cfg, &prov)?)?,
        Command::Energy(_) => {
            let (csv, json) = energy_files(&cfg, &prov)?;
            write("energy.csv", csv)?;
            write("energy.json", json)?;
        }
        Command::Simulate(_) => {
            let (csv, json, outcome) = simulate_files(&cfg, &prov)?;
            write("trajectory.csv", csv)?;
            write("outcome.json", json)?;
            eprintln!(
                "self_righted={} rolls_per_cycle={} stalled={}",
                outcome.self_righted, outcome.rolls_per_cycle, outcome.stalled
            );
        }
        Command::Sweep => {
            let spec = cfg.sweep_spec();
            let diagram = run_sweep(&spec)?;
            write("diagram.csv", diagram_csv(&diagram, &prov))?;
            write("diagram.json", diagram_json(&diagram, &spec, &prov)?)?;
            let failed = diagram.cells.iter().filter(|c| c.error.is_some()).count();
            eprintln!(
                "cells={} failed={failed} binariness={}",
                diagram.cells.len(),
                binariness(&diagram)
            );
        }
        Command::Sidewind(_) => {
            let (csv, json, report) = sidewind_files(&cfg, &prov)?;
            write("sidewind.csv", csv)?;
            write("sidewind.json", json)?;
            eprintln!(
                "lateral_displacement={} BL/cycle",
                report.lateral_displacement
            );
        }
    }
    let resolved = format!("{}{}", prov.csv_comment(), cfg.canonical_toml()?);
    write("config.toml", resolved)?;
    Ok(written)
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// `time_s,joint,axis,angle_rad`, joints numbered along the chain from 1.
pub fn gait_table(cfg: &RunConfig, prov: &Provenance) -> Result<String> {
    let g = &cfg.gait;
    let n = cfg.gait_table.samples;
    let mut out = prov.csv_comment();
    out.push_str("time_s,joint,axis,angle_rad\n");
    for s in 0..n {
        let t = g.period() * s as f64 / n as f64;
        let q = joint_vector(g, t)?;
        for k in 1..=q.num_chain_joints() {
            let (axis, angle) = q.chain_joint(k).expect("k is in range");
            let _ = writeln!(
                out,
                "{},{k},{},{}",
                fmt_f64(t),
                axis.as_str(),
                fmt_f64(angle)
            );
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct EnergySummary<'a> {
    provenance: &'a Provenance,
    leg_length: f64,
    resolution: usize,
    minima: Vec<f64>,
    barrier: f64,
}

pub fn energy_files(cfg: &RunConfig, prov: &Provenance) -> Result<(String, String)> {
    let land = EnergyLandscape::new(&cfg.morphology, cfg.energy.resolution)?;
    let mut csv = prov.csv_comment();
    csv.push_str("gamma_rad,energy_J\n");
    for (g, u) in land.gamma_samples.iter().zip(&land.energy) {
        let _ = writeln!(csv, "{},{}", fmt_f64(*g), fmt_f64(*u));
    }
    let summary = EnergySummary {
        provenance: prov,
        leg_length: cfg.morphology.leg_length,
        resolution: land.resolution(),
        minima: stable_configurations(&land),
        barrier: land.barrier,
    };
    Ok((csv, serde_json::to_string_pretty(&summary)?))
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    provenance: &'a Provenance,
    mode: SimMode,
    cycles: f64,
    delta_gamma_per_cycle: &'a [f64],
    total_delta_gamma: f64,
    outcome: TrialOutcome,
    crossing_times: Vec<Option<f64>>,
    calibration: crate::rollmodel::Calibration,
}

pub fn simulate_files(
    cfg: &RunConfig,
    prov: &Provenance,
) -> Result<(String, String, TrialOutcome)> {
    let land = EnergyLandscape::new(&cfg.morphology, cfg.energy.resolution)?;
    let sim = RollSimulator::new(cfg.morphology, &land, cfg.calibration)
        .with_steps_per_cycle(cfg.simulate.steps_per_cycle);
    let span = if cfg.simulate.half_cycle {
        Span::HalfCycle
    } else {
        Span::Cycles(cfg.simulate.cycles)
    };
    let noise = crate::rollmodel::PerturbationSpec {
        initial_jitter: cfg.simulate.noise.initial_jitter,
        gain_noise: cfg.simulate.noise.gain_noise,
        seed: cfg.seed,
    };
    let start = RollState::inverted();
    let traj = sim.run(&cfg.gait, span, start, &noise, cfg.mode)?;
    let outcome = classify_trial(&traj);

    let mut csv = prov.csv_comment();
    csv.push_str("time_s,gamma_rad");
    for k in 1..=traj.num_modules() {
        if traj.module_gamma.is_some() {
            let _ = write!(csv, ",gamma_{k}_rad");
        }
    }
    csv.push('\n');
    for (i, s) in traj.states.iter().enumerate() {
        let _ = write!(csv, "{},{}", fmt_f64(s.time), fmt_f64(s.gamma));
        if let Some(rows) = &traj.module_gamma {
            for g in &rows[i] {
                let _ = write!(csv, ",{}", fmt_f64(*g));
            }
        }
        csv.push('\n');
    }
    let summary = SimulateSummary {
        provenance: prov,
        mode: traj.mode,
        cycles: traj.cycles,
        delta_gamma_per_cycle: &traj.delta_gamma_per_cycle,
        total_delta_gamma: traj.total_delta_gamma(),
        outcome,
        crossing_times: traj.crossing_times(start.gamma + std::f64::consts::FRAC_PI_2),
        calibration: cfg.calibration,
    };
    Ok((csv, serde_json::to_string_pretty(&summary)?, outcome))
}

#[derive(Serialize)]
struct SidewindSummary<'a> {
    provenance: &'a Provenance,
    lateral_displacement: f64,
    lateral_signed: f64,
    axial_displacement: f64,
    rotation_per_cycle: f64,
    contact_fraction: f64,
    cycles: u32,
}

pub fn sidewind_files(
    cfg: &RunConfig,
    prov: &Provenance,
) -> Result<(String, String, DisplacementReport)> {
    let s = &cfg.sidewind;
    let report = lateral_displacement_with(&s.gait, &cfg.morphology, s.cycles, &s.estimator())?;
    let mut csv = prov.csv_comment();
    csv.push_str("time_s,x_m,y_m,heading_rad,contacts\n");
    for p in &report.path {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            fmt_f64(p.time),
            fmt_f64(p.x),
            fmt_f64(p.y),
            fmt_f64(p.heading),
            p.contacts
        );
    }
    let summary = SidewindSummary {
        provenance: prov,
        lateral_displacement: report.lateral_displacement,
        lateral_signed: report.lateral_signed,
        axial_displacement: report.axial_displacement,
        rotation_per_cycle: report.rotation_per_cycle,
        contact_fraction: report.contact_fraction,
        cycles: s.cycles,
    };
    Ok((csv, serde_json::to_string_pretty(&summary)?, report))
}
