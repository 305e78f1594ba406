//! Kinematic sidewinding estimate for gaits that do not roll the body over.
//!
//! The body is posed with the two-wave template: the lateral bends set the
//! planar shape and each module is lifted by the vertical bend at its place
//! along the body. Bends do not accumulate in height since the body rests on
//! the floor between lifted stretches. Modules touching the floor are held
//! fixed between consecutive samples and the body moves by the planar rigid
//! motion that best keeps them in place (least squares).

use std::collections::BTreeSet;

use nalgebra::{Rotation2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gait::{joint_vector, GaitParams, JointAngles};
use crate::kinematics::{forward_kinematics, link_midpoint, FramePose, Morphology};

pub const DEFAULT_CONTACT_TOL: f64 = 0.002;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SidewindConfig {
    /// Height band above the lowest point counted as contact (m).
    pub contact_tol: f64,
    /// Module lift per unit sine of the local vertical bend, in link lengths.
    pub lift_scale: f64,
    pub samples_per_cycle: usize,
}

impl Default for SidewindConfig {
    fn default() -> Self {
        Self {
            contact_tol: DEFAULT_CONTACT_TOL,
            lift_scale: 0.3,
            samples_per_cycle: 240,
        }
    }
}

impl SidewindConfig {
    pub fn validate(&self) -> Result<()> {
        if self.contact_tol.is_nan() || self.contact_tol < 0.0 {
            return Err(invalid("contact_tol", "must be non-negative"));
        }
        if !(self.lift_scale.is_finite() && self.lift_scale > 0.0) {
            return Err(invalid("lift_scale", "must be positive and finite"));
        }
        if self.samples_per_cycle < 8 {
            return Err(invalid("samples_per_cycle", "must be at least 8"));
        }
        Ok(())
    }

    /// Same physical setup with every length multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            contact_tol: self.contact_tol * s,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplacementReport {
    /// Translation across the mean body axis (BL/cycle), unsigned.
    pub lateral_displacement: f64,
    /// Signed lateral translation, positive to the body's left.
    pub lateral_signed: f64,
    /// Translation along the mean body axis (BL/cycle).
    pub axial_displacement: f64,
    /// Heading change per cycle (rad).
    pub rotation_per_cycle: f64,
    /// Time-averaged fraction of modules in contact.
    pub contact_fraction: f64,
    /// Body-centre path in the floor plane, one entry per sample.
    pub path: Vec<PathSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathSample {
    pub time: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub contacts: usize,
}

/// Lowest point of a module: its tube ends and, if present, its leg tips.
fn module_bottom(pose: &FramePose, morph: &Morphology) -> f64 {
    let r = morph.body_radius;
    let ends = [
        pose.position,
        pose.transform(&Vector3::new(morph.link_length, 0.0, 0.0)),
    ];
    let mut low = ends.iter().map(|p| p.z - r).fold(f64::INFINITY, f64::min);
    if !morph.is_limbless() {
        let reach = morph.body_radius + morph.leg_length;
        let (s, c) = morph.leg_angle.sin_cos();
        let mid = link_midpoint(pose, morph);
        for side in [1.0, -1.0] {
            let tip = mid + pose.orientation * Vector3::new(0.0, side * reach * c, -reach * s);
            low = low.min(tip.z);
        }
    }
    low
}

/// Modules (0-based, base first) whose lowest point lies within `tol` of the
/// lowest point of the whole body.
pub fn contact_set(poses: &[FramePose], morph: &Morphology, tol: f64) -> Result<BTreeSet<usize>> {
    if poses.is_empty() {
        return Err(invalid("poses", "empty pose list"));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(invalid("tol", "must be non-negative"));
    }
    let bottoms: Vec<f64> = poses.iter().map(|p| module_bottom(p, morph)).collect();
    let floor = bottoms.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(bottoms
        .iter()
        .enumerate()
        .filter(|(_, &b)| b - floor <= tol)
        .map(|(k, _)| k)
        .collect())
}

/// Vertical bend interpolated at the centre of module `k`.
fn local_vertical_bend(angles: &JointAngles, k: usize) -> f64 {
    let v = &angles.vertical;
    if v.len() == 1 {
        return v[0];
    }
    // Vertical joint i (0-based) sits at chain coordinate 2i + 1.
    let pos = ((k as f64 - 0.5) / 2.0).clamp(0.0, (v.len() - 1) as f64);
    let i = (pos.floor() as usize).min(v.len() - 2);
    let f = pos - i as f64;
    v[i] * (1.0 - f) + v[i + 1] * f
}

/// Module frames for the template posture.
pub fn template_poses(
    morph: &Morphology,
    angles: &JointAngles,
    lift_scale: f64,
) -> Result<Vec<FramePose>> {
    let mut flat = angles.clone();
    flat.vertical.iter_mut().for_each(|a| *a = 0.0);
    let mut poses = forward_kinematics(morph, &flat, &FramePose::identity())?;
    let lift = lift_scale * morph.link_length;
    for (k, p) in poses.iter_mut().enumerate() {
        p.position.z = lift * local_vertical_bend(angles, k).sin();
    }
    Ok(poses)
}

#[derive(Debug, Clone, Copy)]
struct Planar {
    rot: Rotation2<f64>,
    trans: Vector2<f64>,
}

impl Planar {
    fn apply(&self, p: &Vector2<f64>) -> Vector2<f64> {
        self.rot * p + self.trans
    }
}

/// Rigid motion taking `src` closest to `dst` in least squares. With fewer
/// than two points the heading is kept.
fn fit_rigid(src: &[Vector2<f64>], dst: &[Vector2<f64>], keep: Rotation2<f64>) -> Planar {
    let n = src.len() as f64;
    let cs = src.iter().sum::<Vector2<f64>>() / n;
    let cd = dst.iter().sum::<Vector2<f64>>() / n;
    let (mut dot, mut cross) = (0.0, 0.0);
    for (s, d) in src.iter().zip(dst) {
        let (a, b) = (s - cs, d - cd);
        dot += a.dot(&b);
        cross += a.perp(&b);
    }
    let rot = if src.len() < 2 || (dot == 0.0 && cross == 0.0) {
        keep
    } else {
        Rotation2::new(cross.atan2(dot))
    };
    Planar {
        rot,
        trans: cd - rot * cs,
    }
}

/// Sidewinding displacement of `params` with the default configuration.
pub fn lateral_displacement(
    params: &GaitParams,
    morph: &Morphology,
    cycles: u32,
) -> Result<DisplacementReport> {
    lateral_displacement_with(params, morph, cycles, &SidewindConfig::default())
}

pub fn lateral_displacement_with(
    params: &GaitParams,
    morph: &Morphology,
    cycles: u32,
    cfg: &SidewindConfig,
) -> Result<DisplacementReport> {
    params.validate()?;
    displacement_for_schedule(
        |t| joint_vector(params, t),
        params.period(),
        morph,
        cycles,
        cfg,
    )
}

/// As [`lateral_displacement`] for an arbitrary joint schedule of period
/// `period`.
pub fn displacement_for_schedule(
    schedule: impl Fn(f64) -> Result<JointAngles>,
    period: f64,
    morph: &Morphology,
    cycles: u32,
    cfg: &SidewindConfig,
) -> Result<DisplacementReport> {
    morph.validate()?;
    cfg.validate()?;
    if cycles == 0 {
        return Err(invalid("cycles", "must be at least 1"));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(invalid("period", "must be positive and finite"));
    }
    let per = cfg.samples_per_cycle;
    let samples = per * cycles as usize;
    let dt = period / per as f64;
    let m = morph.num_modules;

    let mut pose = Planar {
        rot: Rotation2::identity(),
        trans: Vector2::zeros(),
    };
    let mut prev: Option<(Vec<Vector2<f64>>, BTreeSet<usize>)> = None;
    let mut path = Vec::with_capacity(samples + 1);
    let mut frames = Vec::with_capacity(samples + 1);
    let mut axes = Vec::with_capacity(samples + 1);
    let mut contact_total = 0usize;

    for s in 0..=samples {
        let t = s as f64 * dt;
        let poses = template_poses(morph, &schedule(t)?, cfg.lift_scale)?;
        let contacts = contact_set(&poses, morph, cfg.contact_tol)?;
        if contacts.is_empty() {
            return Err(Error::Contact { sample: s });
        }
        let points: Vec<Vector2<f64>> =
            poses.iter().map(|p| link_midpoint(p, morph).xy()).collect();
        if let Some((old, anchored)) = &prev {
            let src: Vec<_> = anchored.iter().map(|&k| points[k]).collect();
            let dst: Vec<_> = anchored.iter().map(|&k| pose.apply(&old[k])).collect();
            pose = fit_rigid(&src, &dst, pose.rot);
        }
        let centre = points.iter().sum::<Vector2<f64>>() / m as f64;
        let world = pose.apply(&centre);
        axes.push(pose.rot * (points[m - 1] - points[0]));
        frames.push(pose);
        if s < samples {
            contact_total += contacts.len();
        }
        path.push(PathSample {
            time: t,
            x: world.x,
            y: world.y,
            heading: pose.rot.angle(),
            contacts: contacts.len(),
        });
        prev = Some((points, contacts));
    }

    // Each cycle is measured in the frame the body had when it started, so
    // slow turning does not fold the path back on itself.
    let (mut lat, mut ax, mut rot) = (0.0, 0.0, 0.0);
    for c in 0..cycles as usize {
        let (a, b) = (c * per, (c + 1) * per);
        let start = frames[a].rot;
        let net = Vector2::new(path[b].x - path[a].x, path[b].y - path[a].y);
        let mean_axis: Vector2<f64> = axes[a..b]
            .iter()
            .filter_map(|v| v.try_normalize(1e-15))
            .sum();
        let axis = start.inverse()
            * mean_axis
                .try_normalize(1e-12)
                .unwrap_or_else(|| start * Vector2::x());
        let local = start.inverse() * net;
        lat += local.dot(&Vector2::new(-axis.y, axis.x));
        ax += local.dot(&axis);
        rot += (start.inverse() * frames[b].rot).angle();
    }
    let scale = 1.0 / (morph.body_length() * cycles as f64);
    let lateral_signed = lat * scale;
    Ok(DisplacementReport {
        lateral_displacement: lateral_signed.abs(),
        lateral_signed,
        axial_displacement: ax * scale,
        rotation_per_cycle: rot / cycles as f64,
        contact_fraction: contact_total as f64 / (samples * m) as f64,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sidewind_gait(xi: f64) -> GaitParams {
        GaitParams::new(PI / 3.0, xi, 4).with_amplitudes(PI / 3.0, PI / 9.0)
    }

    #[test]
    fn straight_body_is_all_contact() {
        let m = Morphology::default();
        let poses =
            forward_kinematics(&m, &JointAngles::zeros(4, 5), &FramePose::identity()).unwrap();
        let set = contact_set(&poses, &m, 0.002).unwrap();
        assert_eq!(set.len(), 10);
        let set = contact_set(&poses, &m, f64::INFINITY).unwrap();
        assert_eq!(set.len(), 10);
    }

    #[test]
    fn travelling_wave_lifts_part_of_the_body() {
        let m = Morphology::default();
        let g = sidewind_gait(0.6);
        let poses = forward_kinematics(&m, &joint_vector(&g, 0.3).unwrap(), &FramePose::identity())
            .unwrap();
        let set = contact_set(&poses, &m, 0.002).unwrap();
        assert!(!set.is_empty() && set.len() < 10, "{set:?}");
        let infinite = contact_set(&poses, &m, f64::INFINITY).unwrap();
        assert_eq!(infinite.len(), 10);
    }

    #[test]
    fn contact_set_rejects_bad_input() {
        let m = Morphology::default();
        assert!(contact_set(&[], &m, 0.002).is_err());
        let poses = vec![FramePose::identity(); 10];
        assert!(contact_set(&poses, &m, -1.0).is_err());
    }

    #[test]
    fn standing_wave_goes_nowhere() {
        for m in [Morphology::default(), Morphology::limbless()] {
            for a in [PI / 12.0, PI / 4.0, PI / 2.0] {
                let r = lateral_displacement(&m.gait(a, 0.0), &m, 2).unwrap();
                assert!(r.lateral_displacement < 1e-9, "{}", r.lateral_displacement);
                assert!(r.axial_displacement.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn legged_sidewinding_is_in_range() {
        let m = Morphology::default();
        let r = lateral_displacement(&sidewind_gait(0.6), &m, 1).unwrap();
        assert!(
            (0.2..=0.7).contains(&r.lateral_displacement),
            "{}",
            r.lateral_displacement
        );
        assert!(r.contact_fraction > 0.0 && r.contact_fraction <= 1.0);
    }

    #[test]
    fn higher_spatial_frequency_is_slower() {
        let m = Morphology::default();
        let low = lateral_displacement(&sidewind_gait(0.6), &m, 1).unwrap();
        let high = lateral_displacement(&sidewind_gait(1.2), &m, 1).unwrap();
        assert!(low.lateral_displacement > high.lateral_displacement);
    }

    #[test]
    fn cycles_are_repeatable() {
        let m = Morphology::default();
        let one = lateral_displacement(&sidewind_gait(0.6), &m, 1).unwrap();
        let three = lateral_displacement(&sidewind_gait(0.6), &m, 3).unwrap();
        assert!((one.lateral_signed - three.lateral_signed).abs() < 1e-9);
    }

    #[test]
    fn zero_cycles_is_rejected() {
        let m = Morphology::default();
        assert!(lateral_displacement(&sidewind_gait(0.6), &m, 0).is_err());
    }
}
