//! Two-wave gait prescription.
//!
//! Lateral (yaw) and vertical (pitch) joints follow traveling waves
//!
//! ```text
//! lateral(t, i)  = A_l * sin(w t + 2 pi xi i / N)
//! vertical(t, i) = A_v * cos(w t + 2 pi xi i / N)
//! ```
//!
//! where `N` is the number of lateral joints. With `xi = 0` every joint of an
//! axis shares the same angle and the gait reduces to the in-place rolling
//! gait. Lateral joints are indexed `1..=N`, vertical joints `1..=N + 1`; the
//! chain alternates vertical/lateral starting and ending with a vertical joint.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Full parameterization of the two-wave gait.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaitParams {
    /// Amplitude of the lateral joints (rad).
    pub amplitude_lateral: f64,
    /// Amplitude of the vertical joints (rad).
    pub amplitude_vertical: f64,
    /// Temporal frequency `w` (rad/s).
    pub temporal_frequency: f64,
    /// Spatial frequency `xi`: wave periods along the body.
    pub spatial_frequency: f64,
    /// Number of lateral joints `N`.
    pub num_lateral_joints: usize,
}

impl Default for GaitParams {
    fn default() -> Self {
        Self::rolling(PI / 4.0, 4)
    }
}

impl GaitParams {
    /// Single-amplitude gait with unit temporal frequency.
    pub fn new(amplitude: f64, spatial_frequency: f64, num_lateral_joints: usize) -> Self {
        Self {
            amplitude_lateral: amplitude,
            amplitude_vertical: amplitude,
            temporal_frequency: 1.0,
            spatial_frequency,
            num_lateral_joints,
        }
    }

    /// In-place rolling gait (`xi = 0`).
    pub fn rolling(amplitude: f64, num_lateral_joints: usize) -> Self {
        Self::new(amplitude, 0.0, num_lateral_joints)
    }

    pub fn with_amplitudes(mut self, lateral: f64, vertical: f64) -> Self {
        self.amplitude_lateral = lateral;
        self.amplitude_vertical = vertical;
        self
    }

    pub fn with_temporal_frequency(mut self, omega: f64) -> Self {
        self.temporal_frequency = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [
            ("amplitude_lateral", self.amplitude_lateral),
            ("amplitude_vertical", self.amplitude_vertical),
        ] {
            if !(0.0..=FRAC_PI_2).contains(&a) {
                return Err(invalid(name, format!("{a} outside [0, pi/2]")));
            }
        }
        if !(self.temporal_frequency.is_finite() && self.temporal_frequency > 0.0) {
            return Err(invalid(
                "temporal_frequency",
                format!("{} must be positive", self.temporal_frequency),
            ));
        }
        if !(self.spatial_frequency.is_finite() && self.spatial_frequency >= 0.0) {
            return Err(invalid(
                "spatial_frequency",
                format!("{} must be non-negative", self.spatial_frequency),
            ));
        }
        if self.num_lateral_joints == 0 {
            return Err(invalid("num_lateral_joints", "must be at least 1"));
        }
        Ok(())
    }

    pub fn num_vertical_joints(&self) -> usize {
        self.num_lateral_joints + 1
    }

    /// Gait period `2 pi / w` in seconds.
    pub fn period(&self) -> f64 {
        TAU / self.temporal_frequency
    }

    /// Phase argument `w t + 2 pi xi i / N` shared by both waves.
    #[inline]
    pub fn phase(&self, t: f64, i: usize) -> f64 {
        self.temporal_frequency * t + self.index_offset(i as f64)
    }

    /// Phase offset of a (possibly fractional) position along the chain,
    /// measured in lateral-joint units.
    #[inline]
    pub fn index_offset(&self, position: f64) -> f64 {
        TAU * self.spatial_frequency * position / self.num_lateral_joints as f64
    }
}

/// Joint angles of the whole chain at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAngles {
    /// `lateral[i - 1]` is lateral joint `i`.
    pub lateral: Vec<f64>,
    /// `vertical[i - 1]` is vertical joint `i`.
    pub vertical: Vec<f64>,
    pub time: f64,
}

impl JointAngles {
    pub fn zeros(num_lateral: usize, num_vertical: usize) -> Self {
        Self {
            lateral: vec![0.0; num_lateral],
            vertical: vec![0.0; num_vertical],
            time: 0.0,
        }
    }

    /// Angle of chain joint `k` (1-based): odd joints are vertical, even
    /// joints lateral.
    pub fn chain_joint(&self, k: usize) -> Option<(Axis, f64)> {
        if k == 0 {
            return None;
        }
        if k % 2 == 1 {
            self.vertical.get(k / 2).map(|&a| (Axis::Vertical, a))
        } else {
            self.lateral.get(k / 2 - 1).map(|&a| (Axis::Lateral, a))
        }
    }

    pub fn num_chain_joints(&self) -> usize {
        self.lateral.len() + self.vertical.len()
    }
}

/// Rotation axis family of a joint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Lateral,
    Vertical,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Lateral => "lateral",
            Axis::Vertical => "vertical",
        }
    }
}

/// Lateral joint `i` (1..=N) at time `t`.
pub fn lateral_angle(params: &GaitParams, t: f64, i: usize) -> Result<f64> {
    let n = params.num_lateral_joints;
    if i == 0 || i > n {
        return Err(Error::JointIndex { index: i, max: n });
    }
    Ok(params.amplitude_lateral * wave(params.phase(t, i)).0)
}

/// Vertical joint `i` (1..=N+1) at time `t`.
pub fn vertical_angle(params: &GaitParams, t: f64, i: usize) -> Result<f64> {
    let n = params.num_vertical_joints();
    if i == 0 || i > n {
        return Err(Error::JointIndex { index: i, max: n });
    }
    Ok(params.amplitude_vertical * wave(params.phase(t, i)).1)
}

/// Evaluates every joint of the chain at time `t`.
pub fn joint_vector(params: &GaitParams, t: f64) -> Result<JointAngles> {
    params.validate()?;
    let lateral = (1..=params.num_lateral_joints)
        .map(|i| params.amplitude_lateral * wave(params.phase(t, i)).0)
        .collect();
    let vertical = (1..=params.num_vertical_joints())
        .map(|i| params.amplitude_vertical * wave(params.phase(t, i)).1)
        .collect();
    Ok(JointAngles {
        lateral,
        vertical,
        time: t,
    })
}

/// Phase lag `2 pi xi / N` between adjacent joints of one axis.
pub fn phase_lag(params: &GaitParams) -> f64 {
    params.index_offset(1.0)
}

/// The in-place rolling gait, written out on its own: both waves share the
/// phase `w t` regardless of joint index.
pub fn rolling_angles(amplitude: f64, omega: f64, t: f64) -> (f64, f64) {
    let (s, c) = wave(omega * t);
    (amplitude * s, amplitude * c)
}

/// `(sin, cos)` of a wave phase. Kept out of line so every caller gets the
/// same bits whether or not the optimizer fuses sin and cos.
#[inline(never)]
fn wave(phase: f64) -> (f64, f64) {
    (phase.sin(), phase.cos())
}
