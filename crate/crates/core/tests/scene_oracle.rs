mod common;

use nalgebra::Vector3;
use pf_core::analysis::analyze_document;
use pf_core::geometry::{
    check_point_on_line, check_shared_vanishing_point, estimate_vanishing_point,
    fit_vanishing_line, perpendicular_distance, segment_to_normal_form, LineSegment, Point2,
    ProjectivePoint, Verdict,
};
use pf_core::reflection::analyze_reflections;
use pf_core::scene::{
    generate_scene, project, reflect_point, vanishing_point_of_direction, CameraModel,
    LightPlacement, SceneSpec, SceneTemplate,
};
use pf_core::shadow::{analyze_shadows, LightHypothesis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    matrix_project, matrix_vanishing_point, point_in_front, random_camera, relative_error,
};

#[test]
fn rotated_camera_matches_matrix_oracle() {
    let rot = nalgebra::Rotation3::from_axis_angle(&Vector3::y_axis(), 30f64.to_radians());
    let camera = CameraModel::new(
        800.0,
        Point2::new(320.0, 240.0),
        *rot.matrix(),
        pf_core::scene::ScenePoint::new(0.5, 1.0, -2.0),
        pf_core::annotation::ImageSize {
            width: 640,
            height: 480,
        },
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let depth = rng.random_range(1.0..50.0);
        let p = point_in_front(&camera, &mut rng, depth);
        let got = project(&camera, &p).unwrap();
        let want = matrix_project(&camera, &p);
        assert!(
            got.distance(&want) <= 1e-9 * want.norm().max(1.0),
            "{got:?} vs {want:?}"
        );
    }
}

#[test]
fn vanishing_point_examples() {
    let cam = CameraModel::identity(100.0, Point2::new(0.0, 0.0));
    assert_eq!(
        vanishing_point_of_direction(&cam, &Vector3::new(1.0, 0.0, 1.0)).unwrap(),
        ProjectivePoint::finite(Point2::new(100.0, 0.0))
    );
    let v = vanishing_point_of_direction(&cam, &Vector3::new(1.0, 0.0, 0.0)).unwrap();
    assert_eq!(v.direction(), Some(Point2::new(1.0, 0.0)));
}

#[test]
fn projection_converges_to_vanishing_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let camera = random_camera(&mut rng);
        let p = point_in_front(&camera, &mut rng, 5.0);
        // a direction heading away from the camera
        let axis = camera.rotation().transpose() * Vector3::z();
        let d = axis
            + Vector3::new(
                rng.random_range(-0.5..0.5),
                rng.random_range(-0.5..0.5),
                rng.random_range(-0.5..0.5),
            );
        let vp = vanishing_point_of_direction(&camera, &d)
            .unwrap()
            .as_finite()
            .unwrap();
        let want = matrix_vanishing_point(&camera, &d);
        assert!(relative_error(vp, want) < 1e-9);

        let errors: Vec<f64> = [1e2, 1e4, 1e6]
            .iter()
            .map(|t| {
                let q = (p.to_vector() + d * *t).into();
                project(&camera, &q).unwrap().distance(&vp)
            })
            .collect();
        assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
        // O(1/t): a hundredfold step shrinks the error about a hundredfold
        assert!(errors[1] < errors[0] / 50.0);
        assert!(errors[2] < errors[1] / 50.0 + 1e-9 * vp.norm());
    }
}

#[test]
fn collinear_points_stay_collinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let camera = random_camera(&mut rng);
        let depth = rng.random_range(2.0..20.0);
        let a = point_in_front(&camera, &mut rng, depth);
        let depth = rng.random_range(2.0..20.0);
        let b = point_in_front(&camera, &mut rng, depth);
        let t = rng.random_range(0.1..0.9);
        let m = (a.to_vector() * (1.0 - t) + b.to_vector() * t).into();
        let (pa, pb, pm) = (
            project(&camera, &a).unwrap(),
            project(&camera, &b).unwrap(),
            project(&camera, &m).unwrap(),
        );
        let Ok(seg) = LineSegment::new(pa, pb) else {
            continue;
        };
        let line = segment_to_normal_form(&seg).unwrap();
        let scale = pa.norm().max(pb.norm()).max(1.0);
        assert!(perpendicular_distance(pm, &line) <= 1e-9 * scale);
    }
}

#[test]
fn mirror_midpoints_lie_on_the_mirror() {
    for seed in 0..20 {
        let scene = generate_scene(&SceneSpec::new(SceneTemplate::MirrorBoxes), seed, 0.0).unwrap();
        let mirror = scene.ground_truth.mirror.as_ref().unwrap();
        let n = mirror.plane.normal_vector();
        for p in [
            pf_core::scene::ScenePoint::new(1.0, 0.5, 4.0),
            pf_core::scene::ScenePoint::new(-2.0, 1.5, 7.0),
        ] {
            let r = reflect_point(&mirror.plane, &p);
            let mid = ((p.to_vector() + r.to_vector()) * 0.5).into();
            assert!(mirror.plane.signed_distance(&mid).abs() < 1e-12);
            assert!((r.to_vector() - p.to_vector()).cross(&n).norm() < 1e-12);
        }
    }
}

#[test]
fn tiled_floor_without_injection_is_consistent() {
    for seed in 0..50 {
        let scene = generate_scene(&SceneSpec::new(SceneTemplate::TiledFloor), seed, 0.0).unwrap();
        let doc = &scene.annotations;
        let tiles = &doc.group("tiles-a").unwrap().segments;
        let boxes = &doc.group("box-a").unwrap().segments;
        let shared = check_shared_vanishing_point(tiles, boxes, 3.0).unwrap();
        assert_eq!(shared.verdict.verdict, Verdict::Consistent);
        assert!(
            shared.verdict.score <= 1e-6,
            "seed {seed}: {}",
            shared.verdict.score
        );

        // every group's estimate matches the oracle
        for g in &doc.line_groups {
            let est = estimate_vanishing_point(&g.segments).unwrap();
            let truth = scene.ground_truth.vanishing_points[&g.id]
                .as_finite()
                .unwrap();
            assert!(
                relative_error(est.location.as_finite().unwrap(), truth) < 1e-6,
                "{}",
                g.id
            );
            assert!(est.rms_residual <= 1e-9 * truth.norm().max(1.0));
        }
        let report = analyze_document(doc, Some(3.0), "test");
        assert_eq!(
            report.overall_verdict,
            Verdict::Consistent,
            "seed {seed}: {:?}",
            report.checks
        );
    }
}

#[test]
fn injected_yaw_breaks_the_vanishing_line() {
    for seed in 0..50 {
        let scene = generate_scene(
            &SceneSpec::new(SceneTemplate::TiledFloor).with_yaw(8.0),
            seed,
            0.0,
        )
        .unwrap();
        let doc = &scene.annotations;
        let points: Vec<ProjectivePoint> = ["tiles-a", "tiles-b", "tiles-c"]
            .iter()
            .map(|id| {
                estimate_vanishing_point(&doc.group(id).unwrap().segments)
                    .unwrap()
                    .location
            })
            .collect();
        let line = fit_vanishing_line(&points).unwrap();
        assert!(line.rms_residual <= 1e-9, "{}", line.rms_residual);
        let counter = estimate_vanishing_point(&doc.group("counter").unwrap().segments).unwrap();
        let check = check_point_on_line(&counter.location, &line, 3.0);
        assert_eq!(check.verdict, Verdict::Inconsistent, "seed {seed}");

        let report = analyze_document(doc, Some(3.0), "test");
        assert_eq!(report.overall_verdict, Verdict::Inconsistent);
        let failing: Vec<&str> = report.failing_checks().map(|c| c.id.as_str()).collect();
        assert!(failing.contains(&"on-line:counter"), "{failing:?}");
    }
}

#[test]
fn shadow_lines_meet_at_the_projected_light() {
    for (k, placement) in LightPlacement::ALL.into_iter().enumerate() {
        for seed in 0..40 {
            let spec = SceneSpec::new(SceneTemplate::CubesShadows).with_light(placement);
            let scene = generate_scene(&spec, 1000 * k as u64 + seed, 0.0).unwrap();
            let truth = scene.ground_truth.light.as_ref().unwrap();
            let est = analyze_shadows(&scene.annotations.shadow_pairs, 3.0).unwrap();
            assert_eq!(
                est.hypothesis, truth.hypothesis,
                "{placement:?} seed {seed}: {est:#?}"
            );
            assert_eq!(
                est.verdict.verdict,
                Verdict::Consistent,
                "{placement:?} seed {seed}"
            );
            match (
                est.light_projection.as_finite(),
                truth.projection.as_finite(),
            ) {
                (Some(a), Some(b)) => assert!(relative_error(a, b) < 1e-6, "{a:?} vs {b:?}"),
                (None, None) => {
                    let (a, b) = (
                        est.light_projection.direction().unwrap(),
                        truth.projection.direction().unwrap(),
                    );
                    assert!(a.cross(&b).abs() < 1e-9);
                }
                other => panic!("{placement:?} seed {seed}: finiteness differs {other:?}"),
            }
        }
    }
}

#[test]
fn behind_camera_light_is_recognised() {
    let spec =
        SceneSpec::new(SceneTemplate::CubesShadows).with_light(LightPlacement::BehindPositional);
    let scene = generate_scene(&spec, 3, 0.0).unwrap();
    assert_eq!(
        scene.ground_truth.light.as_ref().unwrap().hypothesis,
        LightHypothesis::BehindCamera
    );
    let est = analyze_shadows(&scene.annotations.shadow_pairs, 3.0).unwrap();
    assert_eq!(est.hypothesis, LightHypothesis::BehindCamera);
}

#[test]
fn reflection_lines_meet_at_the_mirror_normal_vanishing_point() {
    for seed in 0..100 {
        let scene = generate_scene(&SceneSpec::new(SceneTemplate::MirrorBoxes), seed, 0.0).unwrap();
        assert_eq!(scene.annotations.reflection_pairs.len(), 6);
        let truth = scene
            .ground_truth
            .mirror
            .as_ref()
            .unwrap()
            .normal_vanishing_point
            .as_finite()
            .unwrap();
        let result = analyze_reflections(&scene.annotations.reflection_pairs, 3.0).unwrap();
        assert_eq!(result.verdict.verdict, Verdict::Consistent);
        assert!(result.rms_residual <= 1e-6);
        assert!(relative_error(result.intersection.as_finite().unwrap(), truth) < 1e-6);
    }
}

#[test]
fn injected_shifts_are_flagged() {
    for seed in 0..50 {
        for template in [SceneTemplate::CubesShadows, SceneTemplate::MirrorBoxes] {
            let scene =
                generate_scene(&SceneSpec::new(template).with_shift(20.0), seed, 0.0).unwrap();
            let report = analyze_document(&scene.annotations, Some(3.0), "test");
            assert_eq!(
                report.overall_verdict,
                Verdict::Inconsistent,
                "{template} seed {seed}: {:?}",
                report.checks
            );
        }
    }
}

#[test]
fn noise_free_documents_recover_ground_truth_quantities() {
    for template in SceneTemplate::ALL {
        for seed in 0..20 {
            let scene = generate_scene(&SceneSpec::new(template), seed, 0.0).unwrap();
            let report = analyze_document(&scene.annotations, None, "test");
            assert_eq!(
                report.overall_verdict,
                Verdict::Consistent,
                "{template} seed {seed}: {:?}",
                report.checks
            );
        }
    }
}
