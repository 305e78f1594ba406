//! Invariants checked over random inputs.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use selfright::config::RunConfig;
use selfright::gait::{joint_vector, lateral_angle, phase_lag, vertical_angle, GaitParams};
use selfright::kinematics::{
    cross_section, forward_kinematics, polygon_area, FramePose, Morphology,
};
use selfright::rollmodel::{coherence, EnergyLandscape, SimMode};
use selfright::sidewinding::{
    displacement_for_schedule, lateral_displacement_with, SidewindConfig,
};
use selfright::sweep::estimate_psr;

fn gait() -> impl Strategy<Value = (GaitParams, f64, usize)> {
    (
        0.0..FRAC_PI_2,
        0.0..FRAC_PI_2,
        0.1..10.0,
        0.0..2.0,
        1..12usize,
        -50.0..50.0f64,
    )
        .prop_flat_map(|(al, av, w, xi, n, t)| {
            let g = GaitParams::new(al, xi, n)
                .with_amplitudes(al, av)
                .with_temporal_frequency(w);
            (Just(g), Just(t), 1..=n)
        })
}

proptest! {
    #[test]
    fn waves_are_in_quadrature(a in 0.0..FRAC_PI_2, (g, t, i) in gait()) {
        let g = g.with_amplitudes(a, a);
        let l = lateral_angle(&g, t, i).unwrap();
        let v = vertical_angle(&g, t, i).unwrap();
        prop_assert!((l * l + v * v - a * a).abs() < 1e-12);
    }

    #[test]
    fn gait_is_periodic((g, t, i) in gait()) {
        let p = g.period();
        prop_assert!((lateral_angle(&g, t + p, i).unwrap() - lateral_angle(&g, t, i).unwrap()).abs() < 1e-9);
        prop_assert!((vertical_angle(&g, t + p, i).unwrap() - vertical_angle(&g, t, i).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn next_joint_leads_by_the_phase_lag((g, t, i) in gait()) {
        prop_assume!(i < g.num_lateral_joints);
        let shifted = t + phase_lag(&g) / g.temporal_frequency;
        let a = lateral_angle(&g, t, i + 1).unwrap();
        let b = lateral_angle(&g, shifted, i).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        let a = vertical_angle(&g, t, i + 1).unwrap();
        let b = vertical_angle(&g, shifted, i).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn chain_keeps_link_lengths_and_rigid_frames(
        a in 0.0..FRAC_PI_2,
        xi in 0.0..1.5,
        t in 0.0..10.0,
        link in 0.01..0.2,
    ) {
        let morph = Morphology { link_length: link, ..Morphology::default() };
        let q = joint_vector(&morph.gait(a, xi), t).unwrap();
        let poses = forward_kinematics(&morph, &q, &FramePose::identity()).unwrap();
        prop_assert_eq!(poses.len(), morph.num_modules);
        for w in poses.windows(2) {
            prop_assert!(((w[1].position - w[0].position).norm() - link).abs() < 1e-12);
        }
        for p in &poses {
            prop_assert!(p.is_proper(1e-9));
        }
    }

    #[test]
    fn cross_section_area_is_roll_invariant(legs in 0.0..0.15, g1 in -10.0..10.0, g2 in -10.0..10.0) {
        let morph = Morphology::default().with_leg_length(legs);
        let a1 = polygon_area(&cross_section(&morph, g1));
        let a2 = polygon_area(&cross_section(&morph, g2));
        prop_assert!(a1 > 0.0);
        prop_assert!((a1 - a2).abs() < 1e-12 * a1.max(1.0));
    }

    #[test]
    fn coherence_falls_with_spatial_frequency(x in 0.0..1.0f64, dx in 0.0..0.5f64, n in 2..12usize) {
        let y = (x + dx).min(1.0);
        prop_assert!(coherence(y, n) <= coherence(x, n) + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&coherence(x, n)));
    }

    #[test]
    fn psr_is_a_probability(rolls in prop::collection::vec(-2.0..3.0, 1..40)) {
        let p = estimate_psr(&rolls).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mirrored_gait_sidewinds_the_other_way(xi in 0.2..1.2, al in 0.3..1.2, av in 0.1..0.6) {
        let morph = Morphology::default();
        let g = morph.gait(0.0, xi).with_amplitudes(al, av);
        let cfg = SidewindConfig { samples_per_cycle: 120, ..SidewindConfig::default() };
        let fwd = lateral_displacement_with(&g, &morph, 1, &cfg).unwrap();
        let mirrored = |t: f64| {
            let mut q = joint_vector(&g, t)?;
            q.lateral.iter_mut().for_each(|a| *a = -*a);
            Ok(q)
        };
        let back = displacement_for_schedule(mirrored, g.period(), &morph, 1, &cfg).unwrap();
        prop_assert!((fwd.lateral_signed + back.lateral_signed).abs() < 1e-6,
            "{} vs {}", fwd.lateral_signed, back.lateral_signed);
        prop_assert!((fwd.lateral_displacement - back.lateral_displacement).abs() < 1e-6);
    }

    #[test]
    fn sidewinding_is_scale_free(xi in 0.2..1.2, s in 0.2..5.0) {
        let morph = Morphology::default();
        let g = morph.gait(0.0, xi).with_amplitudes(PI / 3.0, PI / 9.0);
        let cfg = SidewindConfig { samples_per_cycle: 120, ..SidewindConfig::default() };
        let a = lateral_displacement_with(&g, &morph, 1, &cfg).unwrap();
        let b = lateral_displacement_with(&g, &morph.scaled(s), 1, &cfg.scaled(s)).unwrap();
        prop_assert!((a.lateral_displacement - b.lateral_displacement).abs() < 1e-9);
        prop_assert!((a.rotation_per_cycle - b.rotation_per_cycle).abs() < 1e-9);
    }

    #[test]
    fn config_round_trips(
        seed in any::<u64>(),
        legs in 0.0..0.15,
        a in 0.0..FRAC_PI_2,
        xi in 0.0..1.5,
        trials in 1..50u32,
        segmented in any::<bool>(),
    ) {
        let mut cfg = RunConfig { seed, ..RunConfig::default() };
        cfg.morphology.leg_length = legs;
        cfg.gait = cfg.morphology.gait(a, xi);
        cfg.sweep.trials_per_cell = trials;
        cfg.mode = if segmented { SimMode::Segmented } else { SimMode::Lumped };
        let text = cfg.to_toml().unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.hash().unwrap(), cfg.hash().unwrap());
    }
}

#[test]
fn barrier_grows_with_leg_length() {
    let barriers: Vec<f64> = [0.0, 0.03, 0.07, 0.11]
        .iter()
        .map(|&l| {
            EnergyLandscape::new(&Morphology::default().with_leg_length(l), 1024)
                .unwrap()
                .barrier
        })
        .collect();
    assert!(barriers[0].abs() < 1e-9, "{barriers:?}");
    assert!(barriers.windows(2).all(|w| w[0] < w[1]), "{barriers:?}");
}
