use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use super::{SceneError, ScenePoint};
use crate::annotation::ImageSize;
use crate::geometry::{Point2, ProjectivePoint};

/// Camera-frame depths at or below this are not imaged.
pub const EPS_DEPTH: f64 = 1e-9;

/// Pinhole camera. The orientation maps world to camera coordinates; the
/// camera frame has x to the right, y down and z along the optical axis, so
/// image rows grow downward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraModel {
    pub focal_px: f64,
    pub principal_point: Point2,
    /// Row-major world→camera rotation.
    pub orientation: [[f64; 3]; 3],
    pub position: ScenePoint,
    pub image_size: ImageSize,
}

impl CameraModel {
    pub fn new(
        focal_px: f64,
        principal_point: Point2,
        rotation: Matrix3<f64>,
        position: ScenePoint,
        image_size: ImageSize,
    ) -> Result<Self, SceneError> {
        let orientation = std::array::from_fn(|r| std::array::from_fn(|c| rotation[(r, c)]));
        let cam = Self {
            focal_px,
            principal_point,
            orientation,
            position,
            image_size,
        };
        cam.validate()?;
        Ok(cam)
    }

    /// Camera at the world origin looking down +Z with identity orientation.
    pub fn identity(focal_px: f64, principal_point: Point2) -> Self {
        Self {
            focal_px,
            principal_point,
            orientation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            position: ScenePoint::new(0.0, 0.0, 0.0),
            image_size: ImageSize {
                width: (2.0 * principal_point.x).round().max(1.0) as u32,
                height: (2.0 * principal_point.y).round().max(1.0) as u32,
            },
        }
    }

    /// Camera at `position` looking along `forward`, with the world +Y axis
    /// appearing up in the image, then rolled by `roll` radians about the
    /// optical axis.
    pub fn looking(
        focal_px: f64,
        image_size: ImageSize,
        position: ScenePoint,
        forward: Vector3<f64>,
        roll: f64,
    ) -> Result<Self, SceneError> {
        let z = forward
            .try_normalize(1e-12)
            .ok_or_else(|| SceneError::InvalidCamera("zero forward vector".into()))?;
        let up = Vector3::y();
        let y = -(up - z * up.dot(&z))
            .try_normalize(1e-9)
            .ok_or_else(|| SceneError::InvalidCamera("forward is vertical".into()))?;
        let x = y.cross(&z);
        let base = Matrix3::from_rows(&[x.transpose(), y.transpose(), z.transpose()]);
        let roll = Rotation3::from_axis_angle(&Unit::new_unchecked(Vector3::z()), roll);
        let principal_point = Point2::new(
            0.5 * image_size.width as f64,
            0.5 * image_size.height as f64,
        );
        Self::new(
            focal_px,
            principal_point,
            roll.matrix() * base,
            position,
            image_size,
        )
    }

    fn validate(&self) -> Result<(), SceneError> {
        if !(self.focal_px > 0.0 && self.focal_px.is_finite()) {
            return Err(SceneError::InvalidCamera(
                "focal length must be positive".into(),
            ));
        }
        let r = self.rotation();
        let err = (r * r.transpose() - Matrix3::identity()).abs().max();
        if err.is_nan() || err > 1e-9 || (r.determinant() - 1.0).abs() > 1e-9 {
            return Err(SceneError::InvalidCamera(
                "orientation is not a rotation".into(),
            ));
        }
        Ok(())
    }

    pub fn rotation(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|r, c| self.orientation[r][c])
    }

    pub fn center(&self) -> Vector3<f64> {
        self.position.to_vector()
    }

    /// World point in camera coordinates.
    pub fn to_camera(&self, p: &ScenePoint) -> Vector3<f64> {
        self.rotation() * (p.to_vector() - self.center())
    }

    /// World direction in camera coordinates.
    pub fn direction_to_camera(&self, d: &Vector3<f64>) -> Vector3<f64> {
        self.rotation() * d
    }

    /// Viewing ray through a pixel, in world coordinates (not normalized).
    pub fn pixel_ray(&self, pixel: Point2) -> Vector3<f64> {
        let ray = Vector3::new(
            (pixel.x - self.principal_point.x) / self.focal_px,
            (pixel.y - self.principal_point.y) / self.focal_px,
            1.0,
        );
        self.rotation().transpose() * ray
    }

    fn image_point(&self, c: &Vector3<f64>) -> ProjectivePoint {
        let f = self.focal_px;
        let pp = self.principal_point;
        ProjectivePoint::new(f * c.x + pp.x * c.z, f * c.y + pp.y * c.z, c.z)
            .unwrap_or_else(|| ProjectivePoint::finite(pp))
    }
}

/// Images a scene point: `(f·X/Z, f·Y/Z)` in camera coordinates, offset by
/// the principal point.
pub fn project(camera: &CameraModel, p: &ScenePoint) -> Result<Point2, SceneError> {
    let c = camera.to_camera(p);
    if c.z <= EPS_DEPTH {
        return Err(SceneError::BehindCamera);
    }
    Ok(Point2::new(
        camera.focal_px * c.x / c.z + camera.principal_point.x,
        camera.focal_px * c.y / c.z + camera.principal_point.y,
    ))
}

/// Homogeneous image of any point other than the camera centre, including
/// points behind the camera (which land on the opposite side of the image)
/// and points in the camera plane (which land at infinity).
pub fn project_homogeneous(camera: &CameraModel, p: &ScenePoint) -> Option<ProjectivePoint> {
    let c = camera.to_camera(p);
    if c.norm() == 0.0 {
        return None;
    }
    let scale = c.norm();
    if c.z.abs() <= EPS_DEPTH * scale {
        return ProjectivePoint::at_infinity(c.x, c.y);
    }
    Some(camera.image_point(&c))
}

/// Vanishing point of a 3-D direction: the limit of `project(p + t·d)` as
/// `t → ∞`. Directions parallel to the sensor vanish at infinity.
pub fn vanishing_point_of_direction(
    camera: &CameraModel,
    d: &Vector3<f64>,
) -> Result<ProjectivePoint, SceneError> {
    let norm = d.norm();
    if norm.is_nan() || norm <= 0.0 {
        return Err(SceneError::DegenerateDirection);
    }
    let c = camera.direction_to_camera(d);
    if c.z.abs() <= EPS_DEPTH * norm {
        return ProjectivePoint::at_infinity(c.x, c.y).ok_or(SceneError::DegenerateDirection);
    }
    Ok(ProjectivePoint::finite(Point2::new(
        camera.focal_px * c.x / c.z + camera.principal_point.x,
        camera.focal_px * c.y / c.z + camera.principal_point.y,
    )))
}
