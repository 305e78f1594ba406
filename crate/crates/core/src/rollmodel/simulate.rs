//! Quasi-static roll integration.
//!
//! The roll angle follows a first-order gradient flow in gait phase
//! `phi = w t`:
//!
//! ```text
//! d gamma / d phi = mu * (tau_drive - U'(gamma) [+ coupling])
//! ```
//!
//! and may never advance past its commanded phase. Lumped mode integrates one
//! body-wide angle with an implicit Euler step; segmented mode integrates one
//! angle per module with explicit sub-stepping.
//!
//! Segmented modules are numbered from the head. The head is the end that
//! leads the traveling wave; module `k` lags it by `2 pi xi (k - 1) / (2 N)`,
//! and its roll command stays at the starting orientation until the wave
//! reaches it.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gait::GaitParams;
use crate::kinematics::Morphology;
use crate::rollmodel::drive::{drive_gain, undulation_lever, Calibration};
use crate::rollmodel::landscape::{EnergyLandscape, DEFAULT_RESOLUTION, GRAVITY};

pub const DEFAULT_STEPS_PER_CYCLE: usize = 400;
pub const MIN_STEPS_PER_CYCLE: usize = 200;
/// Roll rate below which a commanded quarter cycle counts as stalled (rad/s).
pub const STALL_RATE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    #[default]
    Lumped,
    Segmented,
}

impl std::str::FromStr for SimMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lumped" => Ok(Self::Lumped),
            "segmented" => Ok(Self::Segmented),
            other => Err(invalid("mode", format!("unknown mode `{other}`"))),
        }
    }
}

/// How much of the gait to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    Cycles(u32),
    /// `w t` from 0 to pi: the one-shot righting move.
    HalfCycle,
}

impl Span {
    pub fn cycles(&self) -> f64 {
        match self {
            Span::Cycles(n) => *n as f64,
            Span::HalfCycle => 0.5,
        }
    }
}

/// Seeded trial-to-trial variability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    /// Half-width of the uniform jitter on the initial roll angle (rad).
    pub initial_jitter: f64,
    /// Half-width of the uniform multiplicative noise on the drive gain.
    pub gain_noise: f64,
    pub seed: u64,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self::standard(0)
    }
}

impl PerturbationSpec {
    pub fn none() -> Self {
        Self {
            initial_jitter: 0.0,
            gain_noise: 0.0,
            seed: 0,
        }
    }

    pub fn standard(seed: u64) -> Self {
        Self {
            initial_jitter: 0.2,
            gain_noise: 0.1,
            seed,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.initial_jitter == 0.0 && self.gain_noise == 0.0
    }

    /// `(initial offset, gain multiplier)` drawn from this spec's seed.
    pub fn sample(&self) -> (f64, f64) {
        if self.is_zero() {
            return (0.0, 1.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let u = |rng: &mut ChaCha8Rng, half: f64| {
            if half > 0.0 {
                rng.random_range(-half..=half)
            } else {
                0.0
            }
        };
        let jitter = u(&mut rng, self.initial_jitter);
        let scale = 1.0 + u(&mut rng, self.gain_noise);
        (jitter, scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RollState {
    /// Unwrapped roll angle (rad).
    pub gamma: f64,
    pub time: f64,
}

impl RollState {
    /// Upside down at `t = 0`.
    pub fn inverted() -> Self {
        Self {
            gamma: PI,
            time: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RollTrajectory {
    pub mode: SimMode,
    /// Body roll; the module mean in segmented mode.
    pub states: Vec<RollState>,
    /// Per-sample module angles, head first (segmented mode only).
    pub module_gamma: Option<Vec<Vec<f64>>>,
    pub cycles: f64,
    /// Roll per full cycle; a trailing partial cycle is scaled to a full one.
    pub delta_gamma_per_cycle: Vec<f64>,
    pub stalled: bool,
}

impl RollTrajectory {
    pub fn start(&self) -> RollState {
        self.states[0]
    }

    pub fn end(&self) -> RollState {
        *self.states.last().expect("trajectory is never empty")
    }

    pub fn total_delta_gamma(&self) -> f64 {
        self.end().gamma - self.start().gamma
    }

    pub fn mean_delta_gamma_per_cycle(&self) -> f64 {
        let d = &self.delta_gamma_per_cycle;
        d.iter().sum::<f64>() / d.len() as f64
    }

    pub fn num_modules(&self) -> usize {
        self.module_gamma
            .as_ref()
            .and_then(|m| m.first())
            .map_or(1, Vec::len)
    }

    /// First time each module's angle reaches `level`, head first. Lumped
    /// trajectories report a single body entry.
    pub fn crossing_times(&self, level: f64) -> Vec<Option<f64>> {
        let first_cross = |series: &mut dyn Iterator<Item = (f64, f64)>| {
            let mut prev: Option<(f64, f64)> = None;
            for (t, g) in series {
                if g >= level {
                    return Some(match prev {
                        Some((t0, g0)) if g > g0 => t0 + (t - t0) * (level - g0) / (g - g0),
                        _ => t,
                    });
                }
                prev = Some((t, g));
            }
            None
        };
        match &self.module_gamma {
            None => vec![first_cross(
                &mut self.states.iter().map(|s| (s.time, s.gamma)),
            )],
            Some(rows) => (0..self.num_modules())
                .map(|k| {
                    first_cross(
                        &mut self
                            .states
                            .iter()
                            .zip(rows)
                            .map(|(s, row)| (s.time, row[k])),
                    )
                })
                .collect(),
        }
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub self_righted: bool,
    pub rolls_per_cycle: f64,
    pub stalled: bool,
}

/// Self-righted when the mean roll per cycle covers at least the righting
/// half turn. Rolls are counted in completed half turns (righting or
/// wronging), so tracking lag and the initial jitter do not leak into the
/// count.
pub fn classify_trial(traj: &RollTrajectory) -> TrialOutcome {
    let mean = traj.mean_delta_gamma_per_cycle();
    // `+ 0.0` folds a rounded -0 into 0.
    let half_turns = (traj.total_delta_gamma() / PI).round() + 0.0;
    TrialOutcome {
        self_righted: mean >= PI,
        rolls_per_cycle: half_turns / (2.0 * traj.cycles),
        stalled: traj.stalled,
    }
}

/// Integrator bound to one morphology's landscape.
#[derive(Debug, Clone)]
pub struct RollSimulator<'a> {
    pub morph: Morphology,
    pub landscape: &'a EnergyLandscape,
    pub cal: Calibration,
    pub steps_per_cycle: usize,
}

impl<'a> RollSimulator<'a> {
    pub fn new(morph: Morphology, landscape: &'a EnergyLandscape, cal: Calibration) -> Self {
        Self {
            morph,
            landscape,
            cal,
            steps_per_cycle: DEFAULT_STEPS_PER_CYCLE,
        }
    }

    pub fn with_steps_per_cycle(mut self, steps: usize) -> Self {
        self.steps_per_cycle = steps;
        self
    }

    pub fn run(
        &self,
        params: &GaitParams,
        span: Span,
        init: RollState,
        perturb: &PerturbationSpec,
        mode: SimMode,
    ) -> Result<RollTrajectory> {
        params.validate()?;
        self.morph.validate()?;
        self.cal.validate()?;
        if self.steps_per_cycle < MIN_STEPS_PER_CYCLE {
            return Err(invalid(
                "steps_per_cycle",
                format!("{} < {MIN_STEPS_PER_CYCLE}", self.steps_per_cycle),
            ));
        }
        if span == Span::Cycles(0) {
            return Err(invalid("cycles", "must be at least 1"));
        }
        if !init.gamma.is_finite() || !init.time.is_finite() {
            return Err(invalid("init", "non-finite initial state"));
        }
        let (jitter, gain_scale) = perturb.sample();
        let total_steps = match span {
            Span::Cycles(n) => self.steps_per_cycle * n as usize,
            Span::HalfCycle => self.steps_per_cycle / 2,
        };
        let run = Run {
            params,
            init,
            start_gamma: init.gamma + jitter,
            gain_scale,
            total_steps,
            h: TAU / self.steps_per_cycle as f64,
        };
        let mut traj = match mode {
            SimMode::Lumped => self.lumped(&run)?,
            SimMode::Segmented => self.segmented(&run)?,
        };
        traj.cycles = span.cycles();
        traj.delta_gamma_per_cycle = self.per_cycle(&traj.states, span);
        traj.stalled |= detect_low_rate(&traj.states, self.steps_per_cycle / 4);
        Ok(traj)
    }

    fn per_cycle(&self, states: &[RollState], span: Span) -> Vec<f64> {
        match span {
            Span::HalfCycle => {
                let d = states.last().unwrap().gamma - states[0].gamma;
                vec![d / 0.5]
            }
            Span::Cycles(n) => (0..n as usize)
                .map(|k| {
                    let a = states[k * self.steps_per_cycle].gamma;
                    let b = states[(k + 1) * self.steps_per_cycle].gamma;
                    b - a
                })
                .collect(),
        }
    }

    fn lumped(&self, run: &Run<'_>) -> Result<RollTrajectory> {
        let gain = drive_gain(run.params, &self.morph, &self.cal) * run.gain_scale;
        let omega = run.params.temporal_frequency;
        let h_mu = run.h * self.cal.mobility;
        let mut gamma = run.start_gamma;
        let mut states = Vec::with_capacity(run.total_steps + 1);
        states.push(RollState {
            gamma,
            time: run.init.time,
        });
        let mut stalled = false;
        for n in 0..run.total_steps {
            let phi = (n + 1) as f64 * run.h;
            let cmd = run.init.gamma + phi;
            gamma = self.implicit_step(gamma, cmd, h_mu, gain);
            if !gamma.is_finite() {
                return Err(Error::Integration { step: n + 1 });
            }
            stalled |= cmd - gamma > FRAC_PI_2;
            states.push(RollState {
                gamma,
                time: run.init.time + phi / omega,
            });
        }
        Ok(RollTrajectory {
            mode: SimMode::Lumped,
            states,
            module_gamma: None,
            cycles: 0.0,
            delta_gamma_per_cycle: Vec::new(),
            stalled,
        })
    }

    /// Solves `g = g_n + h mu (G sin(cmd - g) - U'(g))` for the first root in
    /// the direction of motion, never passing `max(g_n, cmd)` going forward.
    fn implicit_step(&self, gamma_n: f64, cmd: f64, h_mu: f64, gain: f64) -> f64 {
        let land = self.landscape;
        let f = |g: f64| gamma_n + h_mu * (gain * (cmd - g).sin() - land.slope_at(g)) - g;
        let f0 = f(gamma_n);
        if f0 == 0.0 {
            return gamma_n;
        }
        let d = 0.25 * land.step();
        if f0 > 0.0 {
            let ceiling = gamma_n.max(cmd);
            let mut lo = gamma_n;
            loop {
                let hi = (lo + d).min(ceiling);
                if f(hi) <= 0.0 {
                    return bisect(&f, lo, hi);
                }
                if hi >= ceiling {
                    return ceiling;
                }
                lo = hi;
            }
        } else {
            let floor = gamma_n - 2.0 * TAU;
            let mut hi = gamma_n;
            loop {
                let lo = (hi - d).max(floor);
                if f(lo) >= 0.0 || lo <= floor {
                    return bisect(&f, lo, hi);
                }
                hi = lo;
            }
        }
    }

    fn segmented(&self, run: &Run<'_>) -> Result<RollTrajectory> {
        let m = self.morph.num_modules;
        let params = run.params;
        let omega = params.temporal_frequency;
        let weight = self.morph.module_mass * GRAVITY;
        let gain = weight * undulation_lever(params, &self.morph, &self.cal) * run.gain_scale;
        let slope_scale = 1.0 / m as f64;
        let kappa = self.cal.coupling;
        let mu = self.cal.mobility;
        let lags: Vec<f64> = (0..m)
            .map(|k| params.index_offset(k as f64 / 2.0))
            .collect();

        let stiffness =
            mu * (gain + slope_scale * self.landscape.max_curvature() + 4.0 * kappa).max(1e-12);
        let subs = ((run.h * stiffness / 0.5).ceil() as usize).max(1);
        let dphi = run.h / subs as f64;

        let mut gamma = vec![run.start_gamma; m];
        let mut rate = vec![0.0; m];
        let mut rows = Vec::with_capacity(run.total_steps + 1);
        let mut states = Vec::with_capacity(run.total_steps + 1);
        let mean = |g: &[f64]| g.iter().sum::<f64>() / g.len() as f64;
        rows.push(gamma.clone());
        states.push(RollState {
            gamma: mean(&gamma),
            time: run.init.time,
        });
        let mut stalled = false;
        for n in 0..run.total_steps {
            for s in 0..subs {
                let phi = n as f64 * run.h + (s + 1) as f64 * dphi;
                for k in 0..m {
                    let cmd = run.init.gamma + (phi - lags[k]).max(0.0);
                    let left = if k > 0 { gamma[k - 1] - gamma[k] } else { 0.0 };
                    let right = if k + 1 < m {
                        gamma[k + 1] - gamma[k]
                    } else {
                        0.0
                    };
                    let torque = gain * (cmd - gamma[k]).sin()
                        - slope_scale * self.landscape.slope_at(gamma[k])
                        + kappa * (left + right);
                    rate[k] = mu * torque;
                }
                for k in 0..m {
                    let cmd = run.init.gamma + (phi - lags[k]).max(0.0);
                    let next = gamma[k] + dphi * rate[k];
                    gamma[k] = next.min(gamma[k].max(cmd));
                }
            }
            if gamma.iter().any(|g| !g.is_finite()) {
                return Err(Error::Integration { step: n + 1 });
            }
            let phi = (n + 1) as f64 * run.h;
            stalled |= (0..m).any(|k| {
                let cmd = run.init.gamma + (phi - lags[k]).max(0.0);
                cmd - gamma[k] > FRAC_PI_2
            });
            rows.push(gamma.clone());
            states.push(RollState {
                gamma: mean(&gamma),
                time: run.init.time + phi / omega,
            });
        }
        Ok(RollTrajectory {
            mode: SimMode::Segmented,
            states,
            module_gamma: Some(rows),
            cycles: 0.0,
            delta_gamma_per_cycle: Vec::new(),
            stalled,
        })
    }
}

struct Run<'p> {
    params: &'p GaitParams,
    init: RollState,
    start_gamma: f64,
    gain_scale: f64,
    total_steps: usize,
    /// Phase step (rad).
    h: f64,
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// True when some window of `window` consecutive steps moves slower than
/// [`STALL_RATE`] throughout.
fn detect_low_rate(states: &[RollState], window: usize) -> bool {
    let window = window.max(1);
    let mut run = 0;
    for pair in states.windows(2) {
        let dt = pair[1].time - pair[0].time;
        let rate = (pair[1].gamma - pair[0].gamma).abs() / dt;
        if rate < STALL_RATE {
            run += 1;
            if run >= window {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

/// Builds the landscape at default resolution and runs one trial.
pub fn simulate_roll(
    params: &GaitParams,
    morph: &Morphology,
    span: Span,
    init: RollState,
    perturb: &PerturbationSpec,
    mode: SimMode,
    cal: &Calibration,
) -> Result<RollTrajectory> {
    let landscape = EnergyLandscape::new(morph, DEFAULT_RESOLUTION)?;
    RollSimulator::new(*morph, &landscape, *cal).run(params, span, init, perturb, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rollmodel::drive::coherence;

    fn lumped(morph: &Morphology, a: f64, xi: f64, span: Span) -> RollTrajectory {
        simulate_roll(
            &morph.gait(a, xi),
            morph,
            span,
            RollState::inverted(),
            &PerturbationSpec::none(),
            SimMode::Lumped,
            &Calibration::default(),
        )
        .unwrap()
    }

    #[test]
    fn one_shot_examples() {
        let limbless = lumped(&Morphology::limbless(), PI / 4.0, 0.0, Span::HalfCycle);
        assert!((limbless.total_delta_gamma() - PI).abs() < 1e-3);

        let legged = Morphology::default();
        let weak = lumped(&legged, PI / 12.0, 0.0, Span::HalfCycle);
        assert!(
            weak.total_delta_gamma() < PI / 4.0,
            "{}",
            weak.total_delta_gamma()
        );
        assert!(!classify_trial(&weak).self_righted);

        let strong = lumped(&legged, PI / 4.0, 0.0, Span::HalfCycle);
        let land = EnergyLandscape::new(&legged, DEFAULT_RESOLUTION).unwrap();
        assert!((strong.total_delta_gamma() - PI).abs() < land.step());
        assert!(classify_trial(&strong).self_righted);
    }

    #[test]
    fn limbless_rolls_once_per_cycle() {
        let traj = lumped(&Morphology::limbless(), PI / 4.0, 0.3, Span::Cycles(3));
        assert_eq!(traj.delta_gamma_per_cycle.len(), 3);
        for d in &traj.delta_gamma_per_cycle {
            assert!((d - TAU).abs() < 1e-3, "{d}");
        }
        let out = classify_trial(&traj);
        assert!(out.self_righted && !out.stalled);
        assert_eq!(out.rolls_per_cycle, 1.0);
    }

    #[test]
    fn legged_stall_is_classified() {
        let traj = lumped(&Morphology::default(), PI / 12.0, 0.0, Span::Cycles(2));
        let out = classify_trial(&traj);
        assert_eq!(out.rolls_per_cycle, 0.0);
        assert!(out.stalled && !out.self_righted);
    }

    fn with_increments(d: Vec<f64>) -> RollTrajectory {
        let mut gamma = PI;
        let mut states = vec![RollState { gamma, time: 0.0 }];
        for (k, x) in d.iter().enumerate() {
            gamma += x;
            states.push(RollState {
                gamma,
                time: (k + 1) as f64,
            });
        }
        RollTrajectory {
            mode: SimMode::Lumped,
            states,
            module_gamma: None,
            cycles: d.len() as f64,
            delta_gamma_per_cycle: d,
            stalled: false,
        }
    }

    #[test]
    fn classify_examples() {
        let full = classify_trial(&with_increments(vec![TAU; 3]));
        assert!(full.self_righted);
        assert_eq!(full.rolls_per_cycle, 1.0);

        let none = classify_trial(&with_increments(vec![0.0; 3]));
        assert!(!none.self_righted);
        assert_eq!(none.rolls_per_cycle, 0.0);

        let half = classify_trial(&with_increments(vec![TAU, 0.0, TAU, 0.0]));
        assert_eq!(half.rolls_per_cycle, 0.5);
    }

    #[test]
    fn segmented_wave_runs_head_to_tail() {
        let morph = Morphology::default();
        let traj = simulate_roll(
            &morph.gait(PI / 4.0, 0.6),
            &morph,
            Span::Cycles(1),
            RollState::inverted(),
            &PerturbationSpec::none(),
            SimMode::Segmented,
            &Calibration::default(),
        )
        .unwrap();
        let times = traj.crossing_times(PI + FRAC_PI_2);
        let head = times[0].expect("head crosses");
        let tail = times[morph.num_modules - 1].expect("tail crosses");
        assert!(head < tail);
        assert!(times.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn stiff_segmented_matches_lumped() {
        let morph = Morphology::limbless();
        let cal = Calibration {
            coupling: 50.0,
            ..Calibration::default()
        };
        let gait = morph.gait(PI / 4.0, 0.0);
        let run = |mode| {
            simulate_roll(
                &gait,
                &morph,
                Span::Cycles(2),
                RollState::inverted(),
                &PerturbationSpec::none(),
                mode,
                &cal,
            )
            .unwrap()
        };
        let (l, s) = (run(SimMode::Lumped), run(SimMode::Segmented));
        let rows = s.module_gamma.as_ref().unwrap();
        for c in 0..2 {
            let (a, b) = (
                c * DEFAULT_STEPS_PER_CYCLE,
                (c + 1) * DEFAULT_STEPS_PER_CYCLE,
            );
            for (k, (end, start)) in rows[b].iter().zip(&rows[a]).enumerate() {
                let d = end - start;
                let rel = (d - l.delta_gamma_per_cycle[c]).abs() / l.delta_gamma_per_cycle[c];
                assert!(rel < 0.05, "cycle {c} module {k}: {rel}");
            }
        }
    }

    #[test]
    fn weak_drive_never_rights() {
        // Drive gain below the steepest landscape slope.
        let morph = Morphology::default();
        let land = EnergyLandscape::new(&morph, DEFAULT_RESOLUTION).unwrap();
        let cal = Calibration::default();
        for a in [PI / 24.0, PI / 12.0, PI / 8.0] {
            let gait = morph.gait(a, 0.0);
            assert!(drive_gain(&gait, &morph, &cal) < land.max_slope());
            let traj = lumped(&morph, a, 0.0, Span::Cycles(3));
            assert!(traj.delta_gamma_per_cycle.iter().all(|d| *d < FRAC_PI_2));
        }
    }

    #[test]
    fn deterministic_with_seed() {
        let morph = Morphology::default();
        let go = || {
            simulate_roll(
                &morph.gait(PI / 6.0, 0.2),
                &morph,
                Span::Cycles(2),
                RollState::inverted(),
                &PerturbationSpec::standard(42),
                SimMode::Lumped,
                &Calibration::default(),
            )
            .unwrap()
        };
        let (a, b) = (go(), go());
        let bits = |t: &RollTrajectory| {
            t.states
                .iter()
                .map(|s| s.gamma.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn perturbation_sampling() {
        assert_eq!(PerturbationSpec::none().sample(), (0.0, 1.0));
        for seed in 0..50 {
            let (j, g) = PerturbationSpec::standard(seed).sample();
            assert!(j.abs() <= 0.2 && (g - 1.0).abs() <= 0.1);
        }
        assert_ne!(
            PerturbationSpec::standard(1).sample(),
            PerturbationSpec::standard(2).sample()
        );
    }

    #[test]
    fn rejects_bad_runs() {
        let morph = Morphology::default();
        let land = EnergyLandscape::new(&morph, DEFAULT_RESOLUTION).unwrap();
        let sim = RollSimulator::new(morph, &land, Calibration::default());
        let gait = morph.gait(PI / 4.0, 0.0);
        let none = PerturbationSpec::none();
        let init = RollState::inverted();
        assert!(sim
            .run(&gait, Span::Cycles(0), init, &none, SimMode::Lumped)
            .is_err());
        let coarse = sim.clone().with_steps_per_cycle(100);
        assert!(coarse
            .run(&gait, Span::Cycles(1), init, &none, SimMode::Lumped)
            .is_err());
        let nan = RollState {
            gamma: f64::NAN,
            time: 0.0,
        };
        assert!(sim
            .run(&gait, Span::Cycles(1), nan, &none, SimMode::Lumped)
            .is_err());
    }

    #[test]
    fn limbless_tracks_command() {
        let morph = Morphology::limbless();
        for (a, xi) in [(PI / 12.0, 0.0), (PI / 4.0, 0.8), (PI / 2.0, 0.9)] {
            assert!(coherence(xi, 4) > 0.05);
            let traj = lumped(&morph, a, xi, Span::Cycles(1));
            let omega = morph.gait(a, xi).temporal_frequency;
            let worst = traj
                .states
                .iter()
                .map(|s| (s.gamma - PI - omega * s.time).abs())
                .fold(0.0, f64::max);
            assert!(worst <= 0.05, "A={a} xi={xi}: {worst}");
        }
    }

    #[test]
    fn mode_parses() {
        assert_eq!("lumped".parse::<SimMode>().unwrap(), SimMode::Lumped);
        assert_eq!("segmented".parse::<SimMode>().unwrap(), SimMode::Segmented);
        assert!("other".parse::<SimMode>().is_err());
    }
}
