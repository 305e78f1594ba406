//! Rolling moment produced by body undulation.
//!
//! The drive pulls the roll angle toward the commanded roll phase,
//! `tau = G sin(phi_cmd - gamma)`, with
//!
//! ```text
//! G = M m g * k * (M l) * sin^2(A_v) * C(xi)
//! ```
//!
//! `k` is the calibrated drive gain and `C(xi)` the phase coherence of the
//! per-segment roll commands.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gait::GaitParams;
use crate::kinematics::Morphology;
use crate::rollmodel::landscape::GRAVITY;

/// Model constants that were fixed by calibration rather than measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Calibration {
    /// Roll mobility per radian of gait phase (rad per N m).
    pub mobility: f64,
    /// Torsional coupling between neighbouring modules (N m / rad).
    pub coupling: f64,
    /// Dimensionless gain of the undulation lever arm.
    pub drive_gain: f64,
    /// Ground-contact tolerance for the sidewinding estimator (m).
    pub contact_tol: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            mobility: 2000.0,
            coupling: 0.5,
            drive_gain: 1.0,
            contact_tol: 0.002,
        }
    }
}

impl Calibration {
    pub fn validate(&self) -> Result<()> {
        use crate::error::invalid;
        if !(self.mobility.is_finite() && self.mobility > 0.0) {
            return Err(invalid("mobility", "must be positive"));
        }
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(invalid("coupling", "must be non-negative"));
        }
        if !(self.drive_gain.is_finite() && self.drive_gain >= 0.0) {
            return Err(invalid("drive_gain", "must be non-negative"));
        }
        if self.contact_tol.is_nan() || self.contact_tol < 0.0 {
            return Err(invalid("contact_tol", "must be non-negative"));
        }
        Ok(())
    }
}

/// `|sum_{i=1..N} exp(j 2 pi xi i / N)| / N`.
pub fn coherence(spatial_frequency: f64, num_lateral_joints: usize) -> f64 {
    let n = num_lateral_joints as f64;
    let (re, im) = (1..=num_lateral_joints).fold((0.0, 0.0), |(re, im), i| {
        let a = TAU * spatial_frequency * i as f64 / n;
        (re + a.cos(), im + a.sin())
    });
    re.hypot(im) / n
}

/// Lever arm of the undulating body for one module's weight (m), before the
/// coherence factor.
pub fn undulation_lever(params: &GaitParams, morph: &Morphology, cal: &Calibration) -> f64 {
    let s = params.amplitude_vertical.sin();
    cal.drive_gain * morph.body_length() * s * s
}

/// Drive gain `G` of the whole body (N m).
pub fn drive_gain(params: &GaitParams, morph: &Morphology, cal: &Calibration) -> f64 {
    morph.total_mass()
        * GRAVITY
        * undulation_lever(params, morph, cal)
        * coherence(params.spatial_frequency, params.num_lateral_joints)
}

/// Phase-tracking drive with a fixed gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RollDrive {
    pub gain: f64,
    pub omega: f64,
    /// Commanded roll phase at `t = 0`.
    pub phase0: f64,
}

impl RollDrive {
    pub fn new(params: &GaitParams, morph: &Morphology, cal: &Calibration) -> Self {
        Self {
            gain: drive_gain(params, morph, cal),
            omega: params.temporal_frequency,
            phase0: 0.0,
        }
    }

    pub fn commanded(&self, t: f64) -> f64 {
        self.phase0 + self.omega * t
    }

    pub fn torque(&self, t: f64, gamma: f64) -> f64 {
        self.gain * (self.commanded(t) - gamma).sin()
    }
}

/// Drive torque at time `t` and roll angle `gamma`, with commanded phase `w t`.
pub fn roll_drive(
    params: &GaitParams,
    morph: &Morphology,
    cal: &Calibration,
    t: f64,
    gamma: f64,
) -> Result<f64> {
    params.validate()?;
    morph.validate()?;
    Ok(RollDrive::new(params, morph, cal).torque(t, gamma))
}
