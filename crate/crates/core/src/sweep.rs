//! Behavior-diagram sweep over amplitude and spatial frequency.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kinematics::Morphology;
use crate::provenance::{fmt_f64, Provenance};
use crate::rollmodel::landscape::DEFAULT_RESOLUTION;
use crate::rollmodel::{
    classify_trial, Calibration, EnergyLandscape, PerturbationSpec, RollSimulator, RollState,
    SimMode, Span,
};

/// Inclusive arithmetic grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub end: f64,
}

impl Grid {
    pub fn new(start: f64, step: f64, end: f64) -> Self {
        Self { start, step, end }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        if !(self.start.is_finite() && self.end.is_finite() && self.step.is_finite()) {
            return Err(invalid(name, "grid bounds must be finite"));
        }
        if self.step <= 0.0 {
            return Err(invalid(name, "grid step must be positive"));
        }
        if self.end < self.start {
            return Err(invalid(name, "grid end is below its start"));
        }
        if self.len() > 100_000 {
            return Err(invalid(name, "grid has too many points"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        // Tolerate the end point landing a hair off the lattice.
        ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    /// An inclusive grid always holds its start point.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

/// Trial-to-trial noise used in sweeps; the seed comes from the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Noise {
    pub initial_jitter: f64,
    pub gain_noise: f64,
}

impl Default for Noise {
    fn default() -> Self {
        let p = PerturbationSpec::standard(0);
        Self {
            initial_jitter: p.initial_jitter,
            gain_noise: p.gain_noise,
        }
    }
}

impl Noise {
    pub fn none() -> Self {
        Self {
            initial_jitter: 0.0,
            gain_noise: 0.0,
        }
    }

    fn with_seed(&self, seed: u64) -> PerturbationSpec {
        PerturbationSpec {
            initial_jitter: self.initial_jitter,
            gain_noise: self.gain_noise,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub amplitude_grid: Grid,
    pub xi_grid: Grid,
    pub trials_per_cell: u32,
    pub cycles_per_trial: u32,
    pub seed: u64,
    pub morphology: Morphology,
    pub mode: SimMode,
    pub noise: Noise,
    pub calibration: Calibration,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            amplitude_grid: Grid::new(PI / 24.0, PI / 24.0, PI / 2.0),
            xi_grid: Grid::new(0.0, 0.1, 1.2),
            trials_per_cell: 5,
            cycles_per_trial: 3,
            seed: 0,
            morphology: Morphology::default(),
            mode: SimMode::Lumped,
            noise: Noise::default(),
            calibration: Calibration::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.amplitude_grid.validate("amplitude_grid")?;
        self.xi_grid.validate("xi_grid")?;
        if self.amplitude_grid.start <= 0.0 {
            return Err(invalid("amplitude_grid", "amplitudes must be positive"));
        }
        if self.xi_grid.start < 0.0 {
            return Err(invalid("xi_grid", "spatial frequency must be non-negative"));
        }
        if self.trials_per_cell == 0 {
            return Err(invalid("trials_per_cell", "must be at least 1"));
        }
        if self.cycles_per_trial == 0 {
            return Err(invalid("cycles_per_trial", "must be at least 1"));
        }
        let n = &self.noise;
        if !(n.initial_jitter >= 0.0 && n.gain_noise >= 0.0 && n.gain_noise < 1.0) {
            return Err(invalid(
                "noise",
                "jitter must be >= 0 and gain noise in [0, 1)",
            ));
        }
        self.morphology.validate()?;
        self.calibration.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub amplitude: f64,
    pub xi: f64,
    pub trial_rolls: Vec<f64>,
    pub mean_rolls_per_cycle: f64,
    pub p_sr: f64,
    pub stalled_trials: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BehaviorDiagram {
    pub amplitudes: Vec<f64>,
    pub xis: Vec<f64>,
    /// Amplitude-major: cell `(a, x)` is at `a * xis.len() + x`.
    pub cells: Vec<Cell>,
}

impl BehaviorDiagram {
    pub fn cell(&self, a: usize, x: usize) -> &Cell {
        &self.cells[a * self.xis.len() + x]
    }

    pub fn p_sr_grid(&self) -> Vec<Vec<f64>> {
        self.cells
            .chunks(self.xis.len())
            .map(|row| row.iter().map(|c| c.p_sr).collect())
            .collect()
    }
}

/// Mean of the per-trial roll counts, clamped to `[0, 1]`.
pub fn estimate_psr(trial_rolls: &[f64]) -> Result<f64> {
    if trial_rolls.is_empty() {
        return Err(invalid("trial_rolls", "no trials"));
    }
    let mean = trial_rolls.iter().sum::<f64>() / trial_rolls.len() as f64;
    Ok(if mean.is_nan() {
        mean
    } else {
        mean.clamp(0.0, 1.0)
    })
}

/// Fraction of (non-failed) cells whose `p_sr` lies strictly in `(0.2, 0.8)`.
pub fn binariness(diagram: &BehaviorDiagram) -> f64 {
    let valid: Vec<f64> = diagram
        .cells
        .iter()
        .map(|c| c.p_sr)
        .filter(|p| !p.is_nan())
        .collect();
    if valid.is_empty() {
        return 0.0;
    }
    valid.iter().filter(|&&p| p > 0.2 && p < 0.8).count() as f64 / valid.len() as f64
}

/// Per-trial seeds for one cell. Streams are keyed by cell index so results
/// do not depend on scheduling.
fn trial_seeds(seed: u64, cell: usize, trials: u32) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell as u64);
    (0..trials).map(|_| rng.next_u64()).collect()
}

pub fn run_sweep(spec: &SweepSpec) -> Result<BehaviorDiagram> {
    spec.validate()?;
    let amplitudes = spec.amplitude_grid.values();
    let xis = spec.xi_grid.values();
    let landscape = EnergyLandscape::new(&spec.morphology, DEFAULT_RESOLUTION)?;
    let sim = RollSimulator::new(spec.morphology, &landscape, spec.calibration);
    let n_lat = spec.morphology.num_lateral_joints();

    let cells = (0..amplitudes.len() * xis.len())
        .into_par_iter()
        .map(|idx| {
            let (a, xi) = (amplitudes[idx / xis.len()], xis[idx % xis.len()]);
            let gait = crate::gait::GaitParams::new(a, xi, n_lat);
            let mut rolls = Vec::with_capacity(spec.trials_per_cell as usize);
            let mut stalled = 0;
            for seed in trial_seeds(spec.seed, idx, spec.trials_per_cell) {
                let outcome = sim
                    .run(
                        &gait,
                        Span::Cycles(spec.cycles_per_trial),
                        RollState::inverted(),
                        &spec.noise.with_seed(seed),
                        spec.mode,
                    )
                    .map(|traj| classify_trial(&traj));
                match outcome {
                    Ok(o) => {
                        rolls.push(o.rolls_per_cycle);
                        stalled += o.stalled as u32;
                    }
                    Err(e) => {
                        return Cell {
                            amplitude: a,
                            xi,
                            trial_rolls: rolls,
                            mean_rolls_per_cycle: f64::NAN,
                            p_sr: f64::NAN,
                            stalled_trials: stalled,
                            error: Some(e.to_string()),
                        }
                    }
                }
            }
            let mean = rolls.iter().sum::<f64>() / rolls.len() as f64;
            Cell {
                amplitude: a,
                xi,
                p_sr: estimate_psr(&rolls).unwrap_or(f64::NAN),
                trial_rolls: rolls,
                mean_rolls_per_cycle: mean,
                stalled_trials: stalled,
                error: None,
            }
        })
        .collect();
    Ok(BehaviorDiagram {
        amplitudes,
        xis,
        cells,
    })
}

/// CSV with one row per trial and a `summary` row per cell. Failed cells get
/// an `error` row with `p_sr = NaN`.
pub fn diagram_csv(diagram: &BehaviorDiagram, prov: &Provenance) -> String {
    let mut out = prov.csv_comment();
    out.push_str("A_rad,xi,trial,rolls_per_cycle,p_sr\n");
    for c in &diagram.cells {
        let (a, x) = (fmt_f64(c.amplitude), fmt_f64(c.xi));
        for (k, r) in c.trial_rolls.iter().enumerate() {
            let _ = writeln!(out, "{a},{x},{},{},", k + 1, fmt_f64(*r));
        }
        let tag = if c.error.is_some() {
            "error"
        } else {
            "summary"
        };
        let _ = writeln!(
            out,
            "{a},{x},{tag},{},{}",
            fmt_f64(c.mean_rolls_per_cycle),
            fmt_f64(c.p_sr)
        );
    }
    out
}

#[derive(Serialize)]
struct DiagramDoc<'a> {
    provenance: &'a Provenance,
    spec: &'a SweepSpec,
    binariness: f64,
    diagram: &'a BehaviorDiagram,
}

pub fn diagram_json(
    diagram: &BehaviorDiagram,
    spec: &SweepSpec,
    prov: &Provenance,
) -> Result<String> {
    let doc = DiagramDoc {
        provenance: prov,
        spec,
        binariness: binariness(diagram),
        diagram,
    };
    serde_json::to_string_pretty(&doc)
        .map_err(|e| invalid("diagram", format!("serialization failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(morph: Morphology) -> SweepSpec {
        SweepSpec {
            amplitude_grid: Grid::new(PI / 12.0, PI / 12.0, PI / 3.0),
            xi_grid: Grid::new(0.0, 0.3, 0.6),
            trials_per_cell: 2,
            cycles_per_trial: 2,
            seed: 7,
            morphology: morph,
            ..SweepSpec::default()
        }
    }

    #[test]
    fn default_grid_dimensions() {
        let spec = SweepSpec::default();
        assert_eq!(spec.amplitude_grid.len(), 12);
        assert_eq!(spec.xi_grid.len(), 13);
        let xi = spec.xi_grid.values();
        assert!((xi[12] - 1.2).abs() < 1e-12);
        let a = spec.amplitude_grid.values();
        assert!((a[11] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn psr_examples() {
        assert_eq!(estimate_psr(&[1.0; 5]).unwrap(), 1.0);
        assert_eq!(estimate_psr(&[0.0; 5]).unwrap(), 0.0);
        assert!((estimate_psr(&[1.0, 0.0, 1.0, 0.5, 0.5]).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(estimate_psr(&[1.5, 1.0]).unwrap(), 1.0);
        assert_eq!(estimate_psr(&[-0.5, 0.0]).unwrap(), 0.0);
        assert!(estimate_psr(&[]).is_err());
    }

    fn diagram_of(ps: &[f64]) -> BehaviorDiagram {
        BehaviorDiagram {
            amplitudes: vec![1.0],
            xis: (0..ps.len()).map(|k| k as f64).collect(),
            cells: ps
                .iter()
                .map(|&p| Cell {
                    amplitude: 1.0,
                    xi: 0.0,
                    trial_rolls: vec![p],
                    mean_rolls_per_cycle: p,
                    p_sr: p,
                    stalled_trials: 0,
                    error: None,
                })
                .collect(),
        }
    }

    #[test]
    fn binariness_examples() {
        assert_eq!(binariness(&diagram_of(&[0.0, 1.0, 1.0, 0.0])), 0.0);
        assert_eq!(binariness(&diagram_of(&[0.5; 4])), 1.0);
        assert_eq!(binariness(&diagram_of(&[0.5, f64::NAN])), 1.0);
    }

    #[test]
    fn sweep_is_deterministic_and_complete() {
        let spec = small_spec(Morphology::default());
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a.cells.len(), 4 * 3);
        assert!(a.cells.iter().all(|c| c.trial_rolls.len() == 2));
        let prov = Provenance::new("abc", 7);
        assert_eq!(diagram_csv(&a, &prov), diagram_csv(&b, &prov));
        assert!(a.cells.iter().all(|c| (0.0..=1.0).contains(&c.p_sr)));
    }

    #[test]
    fn seeds_are_per_cell() {
        assert_eq!(trial_seeds(1, 3, 4), trial_seeds(1, 3, 4));
        assert_ne!(trial_seeds(1, 3, 4), trial_seeds(1, 4, 4));
        assert_ne!(trial_seeds(1, 3, 4), trial_seeds(2, 3, 4));
    }

    #[test]
    fn bad_specs_are_rejected() {
        let good = small_spec(Morphology::default());
        for bad in [
            SweepSpec {
                trials_per_cell: 0,
                ..good.clone()
            },
            SweepSpec {
                cycles_per_trial: 0,
                ..good.clone()
            },
            SweepSpec {
                xi_grid: Grid::new(0.0, 0.0, 1.0),
                ..good.clone()
            },
            SweepSpec {
                amplitude_grid: Grid::new(1.0, 0.1, 0.5),
                ..good.clone()
            },
        ] {
            assert!(run_sweep(&bad).is_err());
        }
    }

    #[test]
    fn csv_layout() {
        let spec = small_spec(Morphology::limbless());
        let d = run_sweep(&spec).unwrap();
        let csv = diagram_csv(&d, &Provenance::new("h", 7));
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# config_hash=h seed=7"));
        assert_eq!(lines[1], "A_rad,xi,trial,rolls_per_cycle,p_sr");
        assert_eq!(lines.len(), 2 + 12 * 3);
        assert_eq!(lines.iter().filter(|l| l.contains(",summary,")).count(), 12);
    }
}
