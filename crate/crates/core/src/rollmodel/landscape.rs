//! Roll-angle potential energy of one body cross-section resting on a flat
//! floor.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kinematics::{cross_section, leg_triangles, polygon_centroid, Morphology};

pub const GRAVITY: f64 = 9.81;
pub const DEFAULT_RESOLUTION: usize = 1024;

/// Sampled `U(gamma)` on a uniform grid over `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyLandscape {
    pub gamma_samples: Vec<f64>,
    pub energy: Vec<f64>,
    pub minima: Vec<f64>,
    pub barrier: f64,
    #[serde(skip)]
    slope: Vec<f64>,
}

/// Height of the section centroid above the floor at roll `gamma`.
///
/// The body tube uses the exact support of its circle; the polygon from
/// [`cross_section`] only supplies the centroid and the leg tips.
pub fn support_height(morph: &Morphology, gamma: f64) -> Result<f64> {
    Ok(SupportModel::new(morph)?.height(gamma))
}

pub(crate) struct SupportModel {
    radius: f64,
    centroid: [f64; 2],
    leg_points: Vec<[f64; 2]>,
}

impl SupportModel {
    pub(crate) fn new(morph: &Morphology) -> Result<Self> {
        morph.validate()?;
        let section = cross_section(morph, 0.0);
        let c = polygon_centroid(&section)
            .map_err(|_| Error::Geometry("cross-section has zero area".into()))?;
        let leg_points = leg_triangles(morph)
            .iter()
            .flat_map(|tri| tri.iter().map(|v| [v.x, v.y]))
            .collect();
        Ok(Self {
            radius: morph.body_radius,
            centroid: [c.x, c.y],
            leg_points,
        })
    }

    pub(crate) fn height(&self, gamma: f64) -> f64 {
        let (s, c) = gamma.sin_cos();
        let rot_y = |p: &[f64; 2]| s * p[0] + c * p[1];
        let depth = self
            .leg_points
            .iter()
            .map(|p| -rot_y(p))
            .fold(self.radius, f64::max);
        rot_y(&self.centroid) + depth
    }
}

impl EnergyLandscape {
    /// Landscape of the whole body, `U = M m g h(gamma)`.
    pub fn new(morph: &Morphology, resolution: usize) -> Result<Self> {
        if resolution < 64 {
            return Err(invalid("resolution", format!("{resolution} < 64")));
        }
        let support = SupportModel::new(morph)?;
        let weight = morph.total_mass() * GRAVITY;
        let energy = (0..resolution)
            .map(|k| weight * support.height(TAU * k as f64 / resolution as f64))
            .collect();
        Self::from_samples(energy)
    }

    /// Builds a landscape from energies sampled at `2 pi k / n`.
    pub fn from_samples(energy: Vec<f64>) -> Result<Self> {
        let n = energy.len();
        if n < 3 {
            return Err(invalid("energy", "need at least 3 samples"));
        }
        if energy.iter().any(|e| !e.is_finite()) {
            return Err(Error::Geometry("non-finite energy sample".into()));
        }
        let step = TAU / n as f64;
        let gamma_samples: Vec<f64> = (0..n).map(|k| step * k as f64).collect();
        let slope = (0..n)
            .map(|k| (energy[(k + 1) % n] - energy[(k + n - 1) % n]) / (2.0 * step))
            .collect();
        let minima = strict_minima(&energy);
        let mut out = Self {
            gamma_samples,
            energy,
            minima,
            barrier: 0.0,
            slope,
        };
        out.barrier = out.barrier_from(PI);
        Ok(out)
    }

    pub fn resolution(&self) -> usize {
        self.energy.len()
    }

    pub fn step(&self) -> f64 {
        TAU / self.energy.len() as f64
    }

    /// Linear interpolation of a periodic sampled series.
    fn interp(&self, values: &[f64], gamma: f64) -> f64 {
        let n = values.len();
        let x = gamma.rem_euclid(TAU) / self.step();
        let i = (x.floor() as usize).min(n - 1);
        let f = x - i as f64;
        values[i] + f * (values[(i + 1) % n] - values[i])
    }

    pub fn energy_at(&self, gamma: f64) -> f64 {
        self.interp(&self.energy, gamma)
    }

    /// `U'(gamma)` from central differences, linearly interpolated.
    pub fn slope_at(&self, gamma: f64) -> f64 {
        self.interp(&self.slope, gamma)
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slope
    }

    pub fn max_slope(&self) -> f64 {
        self.slope.iter().copied().fold(0.0, f64::max)
    }

    /// Largest magnitude of the piecewise-linear slope's derivative.
    pub fn max_curvature(&self) -> f64 {
        let n = self.slope.len();
        (0..n)
            .map(|k| (self.slope[(k + 1) % n] - self.slope[k]).abs())
            .fold(0.0, f64::max)
            / self.step()
    }

    /// Highest rise above `U(start)` met while rolling forward from `start`
    /// by half a turn.
    pub fn barrier_from(&self, start: f64) -> f64 {
        let base = self.energy_at(start);
        let n = self.resolution();
        let first = (start.rem_euclid(TAU) / self.step()).ceil() as usize;
        let count = n / 2 + 1;
        (0..count)
            .map(|j| self.energy[(first + j) % n] - base)
            .fold(0.0, f64::max)
    }

    pub fn span(&self) -> f64 {
        let (lo, hi) = self
            .energy
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &e| {
                (l.min(e), h.max(e))
            });
        hi - lo
    }

    pub fn mean(&self) -> f64 {
        self.energy.iter().sum::<f64>() / self.energy.len() as f64
    }
}

/// Strict local minima of a periodic series. A run of equal samples (within
/// round-off) bounded by strictly higher neighbours on both sides counts as
/// one minimum located at the run's centre.
fn strict_minima(energy: &[f64]) -> Vec<f64> {
    let n = energy.len();
    let scale = energy.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let eps = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let same = |a: f64, b: f64| (a - b).abs() <= eps;

    // Rotate so that index 0 starts a run.
    let Some(start) = (0..n).find(|&k| !same(energy[k], energy[(k + n - 1) % n])) else {
        return Vec::new();
    };
    // (first index, length, value)
    let mut runs: Vec<(usize, usize, f64)> = Vec::new();
    for j in 0..n {
        let k = (start + j) % n;
        match runs.last_mut() {
            Some(run) if same(run.2, energy[k]) => run.1 += 1,
            _ => runs.push((k, 1, energy[k])),
        }
    }
    let m = runs.len();
    let step = TAU / n as f64;
    let mut out: Vec<f64> = (0..m)
        .filter(|&j| {
            let prev = runs[(j + m - 1) % m].2;
            let next = runs[(j + 1) % m].2;
            prev > runs[j].2 + eps && next > runs[j].2 + eps
        })
        .map(|j| {
            let (first, len, _) = runs[j];
            (step * (first as f64 + 0.5 * (len - 1) as f64)).rem_euclid(TAU)
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Stable roll configurations, ascending.
pub fn stable_configurations(landscape: &EnergyLandscape) -> Vec<f64> {
    landscape.minima.clone()
}

/// Samples the landscape at `resolution` points.
pub fn energy_landscape(morph: &Morphology, resolution: usize) -> Result<EnergyLandscape> {
    EnergyLandscape::new(morph, resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn limbless_is_flat() {
        let l = energy_landscape(&Morphology::limbless(), 1024).unwrap();
        assert!(l.span() <= 1e-6 * l.mean());
        assert!(l.barrier <= 1e-6);
        assert!(stable_configurations(&l).is_empty());
    }

    #[test]
    fn legged_minima_at_upright_and_inverted() {
        let l = energy_landscape(&Morphology::default(), 1024).unwrap();
        let mins = stable_configurations(&l);
        assert_eq!(mins.len(), 2, "{mins:?}");
        let step = l.step();
        let near = |a: f64, b: f64| ((a - b + PI).rem_euclid(TAU) - PI).abs() <= step;
        assert!(near(mins[0], 0.0));
        assert!(near(mins[1], PI));
    }

    #[test]
    fn legged_barrier_is_leg_lift() {
        // Horizontal legs: inverted and upright rest on the tube; the top of
        // the barrier stands the body on one leg tip.
        let m = Morphology::default();
        let l = energy_landscape(&m, 1024).unwrap();
        let w = m.total_mass() * GRAVITY;
        assert_abs_diff_eq!(l.barrier, w * m.leg_length, epsilon = 1e-9);
        assert_abs_diff_eq!(l.energy[0], w * m.body_radius, epsilon = 1e-12);
    }

    #[test]
    fn synthetic_cos2() {
        let n = 720;
        let l = EnergyLandscape::from_samples(
            (0..n)
                .map(|k| (2.0 * TAU * k as f64 / n as f64).cos())
                .collect(),
        )
        .unwrap();
        let mins = stable_configurations(&l);
        assert_eq!(mins.len(), 2);
        assert_abs_diff_eq!(mins[0], PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mins[1], 1.5 * PI, epsilon = 1e-12);
    }

    #[test]
    fn periodic_and_interpolated() {
        let l = energy_landscape(&Morphology::default(), 1024).unwrap();
        assert_abs_diff_eq!(l.energy_at(0.0), l.energy_at(TAU), epsilon = 1e-9);
        assert_abs_diff_eq!(l.energy_at(-0.3), l.energy_at(TAU - 0.3), epsilon = 1e-12);
    }

    #[test]
    fn bad_inputs() {
        assert!(energy_landscape(&Morphology::default(), 32).is_err());
        let empty = Morphology {
            body_radius: 0.0,
            leg_length: 0.0,
            ..Morphology::default()
        };
        assert!(matches!(
            energy_landscape(&empty, 128),
            Err(Error::Geometry(_))
        ));
    }
}
