//! Synthetic pinhole scenes with analytically known answers.
//!
//! World convention: right-handed, ground plane `y = 0` with +Y up, cameras
//! looking roughly along +Z. Scenes are generated from a seed with ChaCha8;
//! geometry and annotation noise use separate streams so changing the noise
//! level never moves the underlying scene.

mod camera;
mod generate;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use camera::{
    project, project_homogeneous, vanishing_point_of_direction, CameraModel, EPS_DEPTH,
};
pub use generate::{
    generate_scene, GroundTruth, LightPlacement, LightTruth, MirrorTruth, SceneSpec, SceneTemplate,
    SyntheticScene, RNG_ALGORITHM,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("point is behind the camera")]
    BehindCamera,
    #[error("direction vector is zero")]
    DegenerateDirection,
    #[error("light ray never reaches the ground plane")]
    NoShadow,
    #[error("point coincides with the light")]
    DegenerateLight,
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("invalid scene spec: {0}")]
    InvalidSceneSpec(String),
}

/// World-space point, serialized as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct ScenePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ScenePoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

impl From<Vector3<f64>> for ScenePoint {
    fn from(v: Vector3<f64>) -> Self {
        ScenePoint::new(v.x, v.y, v.z)
    }
}

impl From<[f64; 3]> for ScenePoint {
    fn from(v: [f64; 3]) -> Self {
        ScenePoint::new(v[0], v[1], v[2])
    }
}

impl From<ScenePoint> for [f64; 3] {
    fn from(p: ScenePoint) -> Self {
        [p.x, p.y, p.z]
    }
}

/// Light source: a nearby lamp or a distant sun.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PointLight {
    Positional {
        position: ScenePoint,
    },
    /// `direction` is the direction light travels in.
    Directional {
        direction: [f64; 3],
    },
}

impl PointLight {
    pub fn directional(direction: Vector3<f64>) -> Result<Self, SceneError> {
        if direction.norm() == 0.0 {
            return Err(SceneError::DegenerateDirection);
        }
        Ok(PointLight::Directional {
            direction: direction.into(),
        })
    }
}

/// Plane through `origin` with unit `normal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub origin: ScenePoint,
    pub normal: [f64; 3],
}

/// A flat mirror.
pub type MirrorPlane = Plane;

impl Plane {
    /// Normalizes `normal`; fails on the zero vector.
    pub fn new(origin: ScenePoint, normal: Vector3<f64>) -> Result<Self, SceneError> {
        let n = normal
            .try_normalize(0.0)
            .ok_or(SceneError::DegenerateDirection)?;
        Ok(Self {
            origin,
            normal: n.into(),
        })
    }

    /// The ground plane `y = 0`.
    pub fn ground() -> Self {
        Self {
            origin: ScenePoint::new(0.0, 0.0, 0.0),
            normal: [0.0, 1.0, 0.0],
        }
    }

    pub fn normal_vector(&self) -> Vector3<f64> {
        Vector3::from(self.normal)
    }

    pub fn signed_distance(&self, p: &ScenePoint) -> f64 {
        (p.to_vector() - self.origin.to_vector()).dot(&self.normal_vector())
    }
}

/// Where the light ray through `p` meets `ground`.
///
/// For a positional light the ray runs from the light through `p`; for a
/// directional light it runs through `p` along the light direction.
pub fn cast_shadow_point(
    light: &PointLight,
    p: &ScenePoint,
    ground: &Plane,
) -> Result<ScenePoint, SceneError> {
    let n = ground.normal_vector();
    let pv = p.to_vector();
    if ground.signed_distance(p) == 0.0 {
        return Ok(*p);
    }
    let (start, dir) = match light {
        PointLight::Positional { position } => {
            let l = position.to_vector();
            let dir = pv - l;
            if dir.norm() == 0.0 {
                return Err(SceneError::DegenerateLight);
            }
            (l, dir)
        }
        PointLight::Directional { direction } => (pv, Vector3::from(*direction)),
    };
    let denom = dir.dot(&n);
    if denom.abs() <= 1e-12 * dir.norm() {
        return Err(SceneError::NoShadow);
    }
    let s = (ground.origin.to_vector() - start).dot(&n) / denom;
    Ok((start + dir * s).into())
}

/// Mirror image of `p`: `p − 2((p − o)·n)n`.
pub fn reflect_point(mirror: &MirrorPlane, p: &ScenePoint) -> ScenePoint {
    let n = mirror.normal_vector();
    (p.to_vector() - n * (2.0 * mirror.signed_distance(p))).into()
}
