mod common;

use pf_core::geometry::{
    estimate_vanishing_point, fit_vanishing_line, intersect_two_lines, perpendicular_distance,
    segment_to_normal_form, LineSegment, Point2, ProjectivePoint, VanishingPointClass,
};
use pf_core::reflection::{analyze_reflections, ReflectionConstraint};
use pf_core::scene::{generate_scene, LightPlacement, SceneSpec, SceneTemplate};
use pf_core::shadow::{analyze_shadows, LightHypothesis, ShadowConstraint};
use pf_core::Verdict;
use proptest::prelude::*;

use common::{energy, relative_error};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        ..ProptestConfig::default()
    }
}

fn point(range: f64) -> impl Strategy<Value = Point2> {
    (-range..range, -range..range).prop_map(|(x, y)| Point2::new(x, y))
}

/// Segment through `through` with a random direction, offset along the line.
fn segment_through(through: Point2, angle: f64, start: f64, length: f64) -> LineSegment {
    let d = Point2::new(angle.cos(), angle.sin());
    LineSegment::new(through + d.scale(start), through + d.scale(start + length)).unwrap()
}

/// 3–10 lines roughly converging on a point, with endpoint jitter.
fn noisy_pencil() -> impl Strategy<Value = Vec<LineSegment>> {
    (point(2000.0), 3usize..=10).prop_flat_map(|(v, m)| {
        prop::collection::vec(
            (
                0.0..std::f64::consts::PI,
                200.0..800.0,
                50.0..300.0,
                point(2.0),
                point(2.0),
            ),
            m,
        )
        .prop_map(move |specs| {
            specs
                .into_iter()
                .map(|(angle, start, length, jp, jq)| {
                    let s = segment_through(v, angle, start, length);
                    LineSegment::new(s.p + jp, s.q + jq).unwrap()
                })
                .collect()
        })
    })
}

/// Lines through one exact point.
fn exact_pencil() -> impl Strategy<Value = (Point2, Vec<LineSegment>)> {
    (point(5000.0), 2usize..=10).prop_flat_map(|(v, m)| {
        prop::collection::vec((0.0..std::f64::consts::PI, 100.0..800.0, 50.0..300.0), m).prop_map(
            move |specs| {
                let segs = specs
                    .into_iter()
                    .map(|(a, s, l)| segment_through(v, a, s, l))
                    .collect();
                (v, segs)
            },
        )
    })
}

fn two_lines() -> impl Strategy<Value = (LineSegment, LineSegment)> {
    (point(1000.0), point(1000.0), point(1000.0), point(1000.0))
        .prop_filter_map("degenerate", |(a, b, c, d)| {
            Some((LineSegment::new(a, b).ok()?, LineSegment::new(c, d).ok()?))
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn two_line_intersection_is_incident((l1, l2) in two_lines()) {
        let x = intersect_two_lines(&l1, &l2);
        if let Ok(Some(v)) = x.map(|p| p.as_finite()) {
            for l in [&l1, &l2] {
                let form = segment_to_normal_form(l).unwrap();
                prop_assert!(perpendicular_distance(v, &form) <= 1e-9 * (1.0 + v.norm()));
            }
        }
    }

    #[test]
    fn two_lines_reduce_to_the_intersection((l1, l2) in two_lines()) {
        if let (Ok(x), Ok(est)) = (intersect_two_lines(&l1, &l2), estimate_vanishing_point(&[l1, l2])) {
            prop_assert_eq!(est.location, x);
            prop_assert_eq!(est.rms_residual, 0.0);
        }
    }

    #[test]
    fn estimate_is_a_local_minimum(lines in noisy_pencil(), angles in prop::collection::vec(0.0..std::f64::consts::TAU, 100)) {
        let est = estimate_vanishing_point(&lines).unwrap();
        let Some(v) = est.location.as_finite() else { return Ok(()) };
        let e0 = energy(v, &lines);
        for a in angles {
            let moved = v + Point2::new(a.cos(), a.sin());
            prop_assert!(e0 <= energy(moved, &lines) + 1e-9 * e0.max(1.0));
        }
        let h = 1e-3;
        let g = Point2::new(
            (energy(v + Point2::new(h, 0.0), &lines) - energy(v - Point2::new(h, 0.0), &lines)) / (2.0 * h),
            (energy(v + Point2::new(0.0, h), &lines) - energy(v - Point2::new(0.0, h), &lines)) / (2.0 * h),
        );
        // scale: gradient of E for a one-pixel offset per line
        let scale = lines.len() as f64;
        prop_assert!(g.norm() <= 1e-6 * scale.max(e0), "gradient {} energy {}", g.norm(), e0);
    }

    #[test]
    fn concurrent_lines_have_no_residual((v, lines) in exact_pencil()) {
        let est = estimate_vanishing_point(&lines).unwrap();
        if est.classification == VanishingPointClass::Finite {
            prop_assert!(est.rms_residual <= 1e-9 * v.norm().max(1.0), "{}", est.rms_residual);
            prop_assert!(relative_error(est.location.as_finite().unwrap(), v) <= 1e-9);
        }
    }

    #[test]
    fn translation_moves_the_estimate(lines in noisy_pencil(), u in point(500.0)) {
        let est = estimate_vanishing_point(&lines).unwrap();
        let moved: Vec<LineSegment> = lines.iter().map(|s| s.translated(u)).collect();
        let est2 = estimate_vanishing_point(&moved).unwrap();
        match (est.location.as_finite(), est2.location.as_finite()) {
            (Some(a), Some(b)) => prop_assert!((a + u).distance(&b) <= 1e-9 * (1.0 + a.norm() + u.norm())),
            (None, None) => prop_assert_eq!(est.location, est2.location),
            _ => prop_assert!(false, "classification changed under translation"),
        }
    }

    #[test]
    fn rotation_rotates_the_estimate(lines in noisy_pencil(), phi in -3.1f64..3.1) {
        let est = estimate_vanishing_point(&lines).unwrap();
        let rotated: Vec<LineSegment> = lines
            .iter()
            .map(|s| LineSegment::new(s.p.rotate(phi), s.q.rotate(phi)).unwrap())
            .collect();
        let est2 = estimate_vanishing_point(&rotated).unwrap();
        if let (Some(a), Some(b)) = (est.location.as_finite(), est2.location.as_finite()) {
            prop_assert!(a.rotate(phi).distance(&b) <= 1e-9 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn vanishing_point_ignores_line_order(lines in noisy_pencil().prop_shuffle(), seed in any::<u64>()) {
        let est = estimate_vanishing_point(&lines).unwrap();
        let mut shuffled = lines.clone();
        let k = (seed as usize) % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let est2 = estimate_vanishing_point(&shuffled).unwrap();
        prop_assert_eq!(est.location, est2.location);
        prop_assert_eq!(est.rms_residual, est2.rms_residual);
        prop_assert_eq!(est.condition_number, est2.condition_number);
    }

    #[test]
    fn vanishing_line_ignores_point_order(points in prop::collection::vec(point(3000.0), 3..8), k in 0usize..8) {
        let pts: Vec<ProjectivePoint> = points.iter().map(|p| ProjectivePoint::finite(*p)).collect();
        let Ok(line) = fit_vanishing_line(&pts) else { return Ok(()) };
        let mut shuffled = pts.clone();
        shuffled.rotate_left(k % pts.len());
        shuffled.reverse();
        let line2 = fit_vanishing_line(&shuffled).unwrap();
        prop_assert_eq!(line.line, line2.line);
        prop_assert_eq!(line.rms_residual, line2.rms_residual);
    }

    #[test]
    fn homogeneous_scaling_is_invisible(hx in -1e4f64..1e4, hy in -1e4f64..1e4, hw in -10.0f64..10.0, k in prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6]) {
        let a = ProjectivePoint::new(hx, hy, hw);
        let b = ProjectivePoint::new(k * hx, k * hy, k * hw);
        match (a, b) {
            (Some(a), Some(b)) => prop_assert!(a.approx_eq(&b, 1e-14), "{a:?} vs {b:?}"),
            (None, None) => {}
            _ => prop_assert!(false),
        }
        let p2 = ProjectivePoint::new(2.0 * hx, 2.0 * hy, 2.0 * hw);
        prop_assert_eq!(a, p2);
    }

    #[test]
    fn reflection_pairs_are_orientation_free(seed in 0u64..10_000, mask in 0u32..64, noise in 0.0f64..1.0) {
        let scene = generate_scene(&SceneSpec::new(SceneTemplate::MirrorBoxes), seed, noise).unwrap();
        let pairs = scene.annotations.reflection_pairs;
        let swapped: Vec<ReflectionConstraint> = pairs
            .iter()
            .enumerate()
            .map(|(i, c)| if mask & (1 << i) != 0 {
                ReflectionConstraint::new(c.label.clone(), c.reflection_point, c.scene_point)
            } else {
                c.clone()
            })
            .collect();
        let a = analyze_reflections(&pairs, 3.0).unwrap();
        let b = analyze_reflections(&swapped, 3.0).unwrap();
        prop_assert_eq!(a.intersection, b.intersection);
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn reflection_subsets_stay_consistent(seed in 0u64..10_000, mask in 0u32..64) {
        let scene = generate_scene(&SceneSpec::new(SceneTemplate::MirrorBoxes), seed, 0.0).unwrap();
        let subset: Vec<ReflectionConstraint> = scene
            .annotations
            .reflection_pairs
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, c)| c)
            .collect();
        prop_assume!(subset.len() >= 2);
        let r = analyze_reflections(&subset, 3.0).unwrap();
        prop_assert_eq!(r.verdict.verdict, Verdict::Consistent);
    }

    #[test]
    fn swapping_shadow_pairs_swaps_front_and_behind(seed in 0u64..10_000, placement in prop::sample::select(vec![LightPlacement::FrontPositional, LightPlacement::BehindPositional])) {
        let spec = SceneSpec::new(SceneTemplate::CubesShadows).with_light(placement);
        let scene = generate_scene(&spec, seed, 0.0).unwrap();
        let pairs = scene.annotations.shadow_pairs;
        let swapped: Vec<ShadowConstraint> = pairs
            .iter()
            .map(|c| ShadowConstraint::new(c.label.clone(), c.shadow_point, c.object_point))
            .collect();
        let a = analyze_shadows(&pairs, 3.0).unwrap();
        let b = analyze_shadows(&swapped, 3.0).unwrap();
        let admissible = |e: &pf_core::shadow::LightSourceEstimate, h: LightHypothesis| {
            e.per_hypothesis_detail.iter().find(|d| d.hypothesis == h).unwrap().admissible
        };
        prop_assert_eq!(admissible(&a, LightHypothesis::FrontOfCamera), admissible(&b, LightHypothesis::BehindCamera));
        prop_assert_eq!(admissible(&a, LightHypothesis::BehindCamera), admissible(&b, LightHypothesis::FrontOfCamera));
        let (pa, pb) = (a.light_projection.as_finite().unwrap(), b.light_projection.as_finite().unwrap());
        prop_assert!(relative_error(pa, pb) <= 1e-9);
        prop_assert_eq!(a.per_hypothesis_detail.len(), 3);
    }

    #[test]
    fn shadow_light_translates_with_the_image(seed in 0u64..10_000, u in point(300.0)) {
        let spec = SceneSpec::new(SceneTemplate::CubesShadows).with_light(LightPlacement::FrontPositional);
        let scene = generate_scene(&spec, seed, 0.3).unwrap();
        let pairs = scene.annotations.shadow_pairs;
        let moved: Vec<ShadowConstraint> = pairs
            .iter()
            .map(|c| ShadowConstraint::new(c.label.clone(), c.object_point + u, c.shadow_point + u))
            .collect();
        let a = analyze_shadows(&pairs, 3.0).unwrap();
        let b = analyze_shadows(&moved, 3.0).unwrap();
        if let (Some(pa), Some(pb)) = (a.light_projection.as_finite(), b.light_projection.as_finite()) {
            prop_assert!((pa + u).distance(&pb) <= 1e-9 * (1.0 + pa.norm()));
        }
        prop_assert_eq!(a.hypothesis, b.hypothesis);
    }
}
