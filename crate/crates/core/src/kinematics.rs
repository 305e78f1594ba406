//! Forward kinematics of the alternating pitch/yaw chain and the transverse
//! cross-section used by the roll energy model.
//!
//! Frames use x forward along the link, y to the left and z up. Chain joint
//! `k` sits at the distal end of link `k`; odd joints pitch (positive lifts the
//! distal link), even joints yaw (positive turns left).

use std::f64::consts::{PI, TAU};

use nalgebra::{Rotation3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gait::{joint_vector, Axis, GaitParams, JointAngles};

/// Sides of the regular polygon standing in for the body tube.
pub const BODY_POLYGON_SIDES: usize = 64;
/// Base width of the thin triangles that represent the static legs (m).
pub const LEG_WIDTH: f64 = 0.002;

/// Body geometry and mass distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Morphology {
    pub num_modules: usize,
    /// Module (link) length (m).
    pub link_length: f64,
    /// Radius of the body tube (m).
    pub body_radius: f64,
    /// Leg length from body surface to tip (m); zero means limbless.
    pub leg_length: f64,
    /// Leg inclination below horizontal in the upright pose (rad).
    pub leg_angle: f64,
    /// Mass of one module (kg).
    pub module_mass: f64,
}

impl Default for Morphology {
    fn default() -> Self {
        Self {
            num_modules: 10,
            link_length: 0.06,
            body_radius: 0.03,
            leg_length: 0.11,
            leg_angle: 0.0,
            module_mass: 0.1,
        }
    }
}

impl Morphology {
    pub fn limbless() -> Self {
        Self {
            leg_length: 0.0,
            ..Self::default()
        }
    }

    pub fn with_leg_length(mut self, leg_length: f64) -> Self {
        self.leg_length = leg_length;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_modules < 2 {
            return Err(invalid("num_modules", "need at least 2 modules"));
        }
        for (name, v) in [
            ("link_length", self.link_length),
            ("body_radius", self.body_radius),
            ("leg_length", self.leg_length),
            ("module_mass", self.module_mass),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("{v} must be finite and >= 0")));
            }
        }
        if !self.leg_angle.is_finite() {
            return Err(invalid("leg_angle", "must be finite"));
        }
        Ok(())
    }

    pub fn is_limbless(&self) -> bool {
        self.leg_length == 0.0
    }

    pub fn num_joints(&self) -> usize {
        self.num_modules - 1
    }

    pub fn num_lateral_joints(&self) -> usize {
        self.num_joints() / 2
    }

    pub fn num_vertical_joints(&self) -> usize {
        self.num_joints() - self.num_lateral_joints()
    }

    pub fn body_length(&self) -> f64 {
        self.num_modules as f64 * self.link_length
    }

    pub fn total_mass(&self) -> f64 {
        self.num_modules as f64 * self.module_mass
    }

    /// Same shape with every length multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            link_length: self.link_length * s,
            body_radius: self.body_radius * s,
            leg_length: self.leg_length * s,
            ..*self
        }
    }

    /// Gait sized to this chain's joint layout.
    pub fn gait(&self, amplitude: f64, spatial_frequency: f64) -> GaitParams {
        GaitParams::new(amplitude, spatial_frequency, self.num_lateral_joints())
    }
}

/// Rigid frame attached to the proximal end of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePose {
    pub position: Vector3<f64>,
    pub orientation: Rotation3<f64>,
}

impl Default for FramePose {
    fn default() -> Self {
        Self::identity()
    }
}

impl FramePose {
    pub fn identity() -> Self {
        Self {
            position: Vector3::zeros(),
            orientation: Rotation3::identity(),
        }
    }

    pub fn new(position: Vector3<f64>, orientation: Rotation3<f64>) -> Self {
        Self {
            position,
            orientation,
        }
    }

    /// Orthonormal with determinant +1, to `tol`.
    pub fn is_proper(&self, tol: f64) -> bool {
        let m = self.orientation.matrix();
        (m.transpose() * m - nalgebra::Matrix3::identity())
            .abs()
            .max()
            <= tol
            && (m.determinant() - 1.0).abs() <= tol
    }

    /// World point at `local` in this frame.
    pub fn transform(&self, local: &Vector3<f64>) -> Vector3<f64> {
        self.position + self.orientation * local
    }
}

fn joint_rotation(axis: Axis, angle: f64) -> Rotation3<f64> {
    match axis {
        // Positive pitch lifts the distal link: rotate about -y.
        Axis::Vertical => Rotation3::from_axis_angle(&-Vector3::y_axis(), angle),
        Axis::Lateral => Rotation3::from_axis_angle(&Vector3::z_axis(), angle),
    }
}

/// Link frames of the whole chain, link 1 placed at `base`.
pub fn forward_kinematics(
    morph: &Morphology,
    angles: &JointAngles,
    base: &FramePose,
) -> Result<Vec<FramePose>> {
    morph.validate()?;
    if angles.lateral.len() != morph.num_lateral_joints() {
        return Err(Error::Dimension {
            what: "lateral joint angles",
            expected: morph.num_lateral_joints(),
            got: angles.lateral.len(),
        });
    }
    if angles.vertical.len() != morph.num_vertical_joints() {
        return Err(Error::Dimension {
            what: "vertical joint angles",
            expected: morph.num_vertical_joints(),
            got: angles.vertical.len(),
        });
    }
    let step = Vector3::new(morph.link_length, 0.0, 0.0);
    let mut poses = Vec::with_capacity(morph.num_modules);
    let mut pose = *base;
    poses.push(pose);
    for k in 1..morph.num_modules {
        let (axis, angle) = angles.chain_joint(k).expect("joint layout checked above");
        let position = pose.transform(&step);
        let orientation = pose.orientation * joint_rotation(axis, angle);
        pose = FramePose::new(position, orientation);
        poses.push(pose);
    }
    Ok(poses)
}

/// Midpoint of the link whose proximal frame is `pose`.
pub fn link_midpoint(pose: &FramePose, morph: &Morphology) -> Vector3<f64> {
    pose.transform(&Vector3::new(0.5 * morph.link_length, 0.0, 0.0))
}

/// Mass-weighted mean of the link midpoints.
pub fn center_of_mass(poses: &[FramePose], morph: &Morphology) -> Result<Vector3<f64>> {
    if poses.is_empty() {
        return Err(invalid("poses", "empty pose list"));
    }
    // Modules share one mass, so the weighted mean is the plain mean.
    let sum: Vector3<f64> = poses.iter().map(|p| link_midpoint(p, morph)).sum();
    Ok(sum / poses.len() as f64)
}

fn rotate2(v: Vector2<f64>, angle: f64) -> Vector2<f64> {
    let (s, c) = angle.sin_cos();
    Vector2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Directions (angle in the transverse plane, upright frame) of the two legs.
pub(crate) fn leg_directions(morph: &Morphology) -> [f64; 2] {
    [-morph.leg_angle, PI + morph.leg_angle]
}

/// Vertices of the leg triangles in the upright frame: base corners on the
/// body circle and the tip, for each leg.
pub(crate) fn leg_triangles(morph: &Morphology) -> Vec<[Vector2<f64>; 3]> {
    if morph.is_limbless() {
        return Vec::new();
    }
    let r = morph.body_radius;
    let half = leg_half_angle(r);
    leg_directions(morph)
        .iter()
        .map(|&dir| {
            let at = |a: f64, rad: f64| Vector2::new(rad * a.cos(), rad * a.sin());
            [
                at(dir - half, r),
                at(dir, r + morph.leg_length),
                at(dir + half, r),
            ]
        })
        .collect()
}

fn leg_half_angle(r: f64) -> f64 {
    if r > 0.0 {
        (0.5 * LEG_WIDTH / r).min(1.0).asin()
    } else {
        0.0
    }
}

/// Transverse silhouette of one module rotated by roll angle `gamma`: the
/// body disc as a regular polygon with the two legs spliced in as spikes.
/// Vertices are counter-clockwise around the body axis.
pub fn cross_section(morph: &Morphology, gamma: f64) -> Vec<Vector2<f64>> {
    let r = morph.body_radius;
    let k = BODY_POLYGON_SIDES;
    let disc_angle = |j: usize| TAU * j as f64 / k as f64;
    let mut upright: Vec<Vector2<f64>> = Vec::with_capacity(k + 6);
    if morph.is_limbless() {
        upright.extend((0..k).map(|j| {
            let a = disc_angle(j);
            Vector2::new(r * a.cos(), r * a.sin())
        }));
    } else {
        let half = leg_half_angle(r);
        let legs = leg_triangles(morph);
        // (angle, vertex) pairs, sorted by angle around the body.
        let mut items: Vec<(f64, Vec<Vector2<f64>>)> = Vec::new();
        let dirs = leg_directions(morph).map(|d| d.rem_euclid(TAU));
        for j in 0..k {
            let a = disc_angle(j);
            let blocked = dirs.iter().any(|&d| {
                let diff = (a - d + PI).rem_euclid(TAU) - PI;
                diff.abs() <= half
            });
            if !blocked {
                items.push((a, vec![Vector2::new(r * a.cos(), r * a.sin())]));
            }
        }
        for (dir, tri) in dirs.iter().zip(legs) {
            items.push((*dir, tri.to_vec()));
        }
        // Sort by angle measured from just past the first leg's base so that a
        // spike straddling angle zero stays contiguous.
        let start = dirs[0] + half + 1e-12;
        items.sort_by(|a, b| {
            let ka = (a.0 - start).rem_euclid(TAU);
            let kb = (b.0 - start).rem_euclid(TAU);
            ka.total_cmp(&kb)
        });
        upright.extend(items.into_iter().flat_map(|(_, v)| v));
    }
    upright.into_iter().map(|v| rotate2(v, gamma)).collect()
}

/// Signed area of a closed polygon (positive when counter-clockwise).
pub fn polygon_area(poly: &[Vector2<f64>]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

/// Area centroid of a closed polygon.
pub fn polygon_centroid(poly: &[Vector2<f64>]) -> Result<Vector2<f64>> {
    let area = polygon_area(poly);
    if area.abs() < 1e-300 || poly.len() < 3 {
        return Err(Error::Geometry("polygon has zero area".into()));
    }
    let n = poly.len();
    let mut c = Vector2::zeros();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let w = a.x * b.y - b.x * a.y;
        c += (a + b) * w;
    }
    Ok(c / (6.0 * area))
}

/// Vertical extent (max minus min) of the link origins at time `t`, with the
/// first link lying flat.
pub fn body_wave_height(morph: &Morphology, params: &GaitParams, t: f64) -> Result<f64> {
    let angles = joint_vector(params, t)?;
    let poses = forward_kinematics(morph, &angles, &FramePose::identity())?;
    let (lo, hi) = poses
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.position.z), hi.max(p.position.z))
        });
    Ok(hi - lo)
}
