//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the estimation code under test.

#![allow(dead_code)]

use nalgebra::{Matrix3, Matrix3x4, Rotation3, Vector3, Vector4};
use pf_core::geometry::{LineSegment, Point2};
use pf_core::scene::{CameraModel, ScenePoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Distance from `v` to the infinite line through a segment, from the
/// cross-product area formula.
pub fn line_distance(v: Point2, s: &LineSegment) -> f64 {
    let (dx, dy) = (s.q.x - s.p.x, s.q.y - s.p.y);
    ((v.x - s.p.x) * dy - (v.y - s.p.y) * dx).abs() / dx.hypot(dy)
}

/// Sum of squared perpendicular distances.
pub fn energy(v: Point2, segments: &[LineSegment]) -> f64 {
    segments.iter().map(|s| line_distance(v, s).powi(2)).sum()
}

/// Brute-force minimizer of [`energy`]: a coarse grid over `±extent` around
/// `centre`, then Newton steps with finite-difference derivatives.
pub fn brute_force_minimizer(segments: &[LineSegment], centre: Point2, extent: f64) -> Point2 {
    let steps = 60;
    let mut best = centre;
    let mut best_e = f64::INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let p = Point2::new(
                centre.x - extent + 2.0 * extent * i as f64 / steps as f64,
                centre.y - extent + 2.0 * extent * j as f64 / steps as f64,
            );
            let e = energy(p, segments);
            if e < best_e {
                best = p;
                best_e = e;
            }
        }
    }
    let mut v = best;
    for _ in 0..50 {
        let h = 1e-3 * (1.0 + v.x.abs().max(v.y.abs()));
        let e = |dx: f64, dy: f64| energy(Point2::new(v.x + dx, v.y + dy), segments);
        let gx = (e(h, 0.0) - e(-h, 0.0)) / (2.0 * h);
        let gy = (e(0.0, h) - e(0.0, -h)) / (2.0 * h);
        let hxx = (e(h, 0.0) - 2.0 * e(0.0, 0.0) + e(-h, 0.0)) / (h * h);
        let hyy = (e(0.0, h) - 2.0 * e(0.0, 0.0) + e(0.0, -h)) / (h * h);
        let hxy = (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4.0 * h * h);
        let det = hxx * hyy - hxy * hxy;
        if det.abs() < 1e-300 {
            break;
        }
        let step = Point2::new((hyy * gx - hxy * gy) / det, (hxx * gy - hxy * gx) / det);
        v = Point2::new(v.x - step.x, v.y - step.y);
        if step.norm() < 1e-12 * (1.0 + v.norm()) {
            break;
        }
    }
    v
}

/// `K [R | −R C]` assembled directly from the camera fields.
pub fn projection_matrix(camera: &CameraModel) -> Matrix3x4<f64> {
    let k = Matrix3::new(
        camera.focal_px,
        0.0,
        camera.principal_point.x,
        0.0,
        camera.focal_px,
        camera.principal_point.y,
        0.0,
        0.0,
        1.0,
    );
    let r = Matrix3::from_fn(|i, j| camera.orientation[i][j]);
    let c = Vector3::new(camera.position.x, camera.position.y, camera.position.z);
    let t = -(r * c);
    let mut rt = Matrix3x4::zeros();
    rt.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
    rt.fixed_view_mut::<3, 1>(0, 3).copy_from(&t);
    k * rt
}

pub fn matrix_project(camera: &CameraModel, p: &ScenePoint) -> Point2 {
    let x = projection_matrix(camera) * Vector4::new(p.x, p.y, p.z, 1.0);
    Point2::new(x[0] / x[2], x[1] / x[2])
}

/// Image of the point at infinity in direction `d`, through the matrix.
pub fn matrix_vanishing_point(camera: &CameraModel, d: &Vector3<f64>) -> Point2 {
    let x = projection_matrix(camera) * Vector4::new(d.x, d.y, d.z, 0.0);
    Point2::new(x[0] / x[2], x[1] / x[2])
}

/// Random camera built from Euler angles, independent of the crate's
/// look-at constructor.
pub fn random_camera(rng: &mut ChaCha8Rng) -> CameraModel {
    let rot = Rotation3::from_euler_angles(
        rng.random_range(-0.6..0.6),
        rng.random_range(-3.1..3.1),
        rng.random_range(-0.6..0.6),
    );
    CameraModel {
        focal_px: rng.random_range(200.0..2000.0),
        principal_point: Point2::new(
            rng.random_range(200.0..800.0),
            rng.random_range(150.0..600.0),
        ),
        orientation: std::array::from_fn(|i| std::array::from_fn(|j| rot.matrix()[(i, j)])),
        position: ScenePoint::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        ),
        image_size: pf_core::annotation::ImageSize {
            width: 1000,
            height: 750,
        },
    }
}

/// World point at camera depth `depth` along a random viewing direction.
pub fn point_in_front(camera: &CameraModel, rng: &mut ChaCha8Rng, depth: f64) -> ScenePoint {
    let c = Vector3::new(
        rng.random_range(-0.8..0.8),
        rng.random_range(-0.6..0.6),
        1.0,
    ) * depth;
    let r = Matrix3::from_fn(|i, j| camera.orientation[i][j]);
    let w =
        r.transpose() * c + Vector3::new(camera.position.x, camera.position.y, camera.position.z);
    ScenePoint::new(w.x, w.y, w.z)
}

/// Relative distance between two image points, scaled by the larger norm
/// (at least 1).
pub fn relative_error(a: Point2, b: Point2) -> f64 {
    a.distance(&b) / a.norm().max(b.norm()).max(1.0)
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}
