use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::camera::{project, project_homogeneous, vanishing_point_of_direction, CameraModel};
use super::{
    cast_shadow_point, reflect_point, MirrorPlane, Plane, PointLight, SceneError, ScenePoint,
};
use crate::annotation::{AnnotationDocument, ImageSize, LineGroup};
use crate::geometry::{LineSegment, Point2, ProjectivePoint};
use crate::reflection::ReflectionConstraint;
use crate::shadow::{LightHypothesis, ShadowConstraint};

/// Name of the generator recorded in every ground-truth document.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

const IMAGE_SIZE: ImageSize = ImageSize {
    width: 1024,
    height: 768,
};
const MAX_DRAWS: usize = 128;
const MIN_PAIR_SEPARATION_PX: f64 = 10.0;
const TILE_SPACING: f64 = 0.5;
const HALF_LENGTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SceneTemplate {
    /// Tiled floor with two orthogonal tile families, a diagonal family, a
    /// box aligned with the first family and an optional mis-set counter.
    TiledFloor,
    /// Three cubes on the ground lit by one light.
    CubesShadows,
    /// Three boxes in front of a vertical mirror.
    MirrorBoxes,
}

impl SceneTemplate {
    pub const ALL: [SceneTemplate; 3] = [
        SceneTemplate::TiledFloor,
        SceneTemplate::CubesShadows,
        SceneTemplate::MirrorBoxes,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SceneTemplate::TiledFloor => "tiled-floor",
            SceneTemplate::CubesShadows => "cubes-shadows",
            SceneTemplate::MirrorBoxes => "mirror-boxes",
        }
    }
}

impl fmt::Display for SceneTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SceneTemplate {
    type Err = SceneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SceneTemplate::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| SceneError::InvalidSceneSpec(format!("unknown template {s:?}")))
    }
}

/// Where the cubes-shadows light is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LightPlacement {
    /// Lamp ahead of the camera.
    FrontPositional,
    /// Lamp behind the camera.
    BehindPositional,
    /// Distant light whose rays are parallel to the image plane, so the
    /// shadows are parallel in the image.
    Overhead,
    /// Sun in front of the camera.
    FrontDirectional,
    /// Sun behind the camera.
    BehindDirectional,
}

impl LightPlacement {
    pub const ALL: [LightPlacement; 5] = [
        LightPlacement::FrontPositional,
        LightPlacement::BehindPositional,
        LightPlacement::Overhead,
        LightPlacement::FrontDirectional,
        LightPlacement::BehindDirectional,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub template: SceneTemplate,
    /// Lines per tile family (tiled-floor only), at least 2.
    pub lines_per_family: usize,
    /// Tilt of the counter-top edges out of the floor plane, in degrees.
    /// When set, tiled-floor scenes gain a `counter` group that claims to be
    /// parallel to `tiles-a`.
    pub inject_yaw_deg: Option<f64>,
    /// Perpendicular pixel shift applied to the first shadow or reflection
    /// pair.
    pub inject_shift_px: Option<f64>,
    /// Light placement for cubes-shadows; drawn from the seed when unset.
    pub light: Option<LightPlacement>,
}

impl SceneSpec {
    pub fn new(template: SceneTemplate) -> Self {
        Self {
            template,
            lines_per_family: 4,
            inject_yaw_deg: None,
            inject_shift_px: None,
            light: None,
        }
    }

    pub fn with_yaw(mut self, degrees: f64) -> Self {
        self.inject_yaw_deg = Some(degrees);
        self
    }

    pub fn with_shift(mut self, pixels: f64) -> Self {
        self.inject_shift_px = Some(pixels);
        self
    }

    pub fn with_light(mut self, light: LightPlacement) -> Self {
        self.light = Some(light);
        self
    }

    fn validate(&self) -> Result<(), SceneError> {
        let invalid = |m: &str| Err(SceneError::InvalidSceneSpec(m.to_string()));
        if !(2..=64).contains(&self.lines_per_family) {
            return invalid("lines_per_family must be between 2 and 64");
        }
        if let Some(d) = self.inject_yaw_deg {
            if !(d.is_finite() && d.abs() <= 60.0) {
                return invalid("inject_yaw_deg must lie in [-60, 60]");
            }
        }
        if let Some(s) = self.inject_shift_px {
            if !(s.is_finite() && s.abs() <= 1000.0) {
                return invalid("inject_shift_px must lie in [-1000, 1000]");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightTruth {
    pub source: PointLight,
    /// Image of the light, or of the direction toward a distant light.
    pub projection: ProjectivePoint,
    pub hypothesis: LightHypothesis,
    pub placement: LightPlacement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorTruth {
    pub plane: MirrorPlane,
    pub normal_vanishing_point: ProjectivePoint,
}

/// Analytically known answers for a generated scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruth {
    pub template: SceneTemplate,
    pub seed: u64,
    pub noise_sigma: f64,
    pub rng: String,
    pub camera: CameraModel,
    /// True vanishing point of every line group, by group id.
    pub vanishing_points: BTreeMap<String, ProjectivePoint>,
    /// Vanishing line of the ground plane as `[a, b, c]` with `a² + b² = 1`.
    pub horizon: [f64; 3],
    pub light: Option<LightTruth>,
    pub mirror: Option<MirrorTruth>,
    pub inject_yaw_deg: Option<f64>,
    pub inject_shift_px: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticScene {
    pub camera: CameraModel,
    pub annotations: AnnotationDocument,
    pub ground_truth: GroundTruth,
    pub seed: u64,
    pub noise_sigma: f64,
}

/// Generates a scene. Geometry comes from one ChaCha8 stream seeded with
/// `seed` and annotation noise from a second, so the noise level never
/// changes the scene itself.
pub fn generate_scene(
    spec: &SceneSpec,
    seed: u64,
    noise_sigma: f64,
) -> Result<SyntheticScene, SceneError> {
    spec.validate()?;
    if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
        return Err(SceneError::InvalidSceneSpec(
            "noise sigma must be non-negative".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..MAX_DRAWS {
        let draw = match spec.template {
            SceneTemplate::TiledFloor => tiled_floor(spec, &mut rng),
            SceneTemplate::CubesShadows => cubes_shadows(spec, &mut rng),
            SceneTemplate::MirrorBoxes => mirror_boxes(spec, &mut rng),
        };
        match draw {
            Ok(draw) => return Ok(finish(spec, seed, noise_sigma, draw)),
            Err(e) => last = Some(e),
        }
    }
    Err(SceneError::InvalidSceneSpec(format!(
        "no valid scene after {MAX_DRAWS} draws: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Raw output of one template draw, before noise.
struct Draw {
    camera: CameraModel,
    doc: AnnotationDocument,
    vanishing_points: BTreeMap<String, ProjectivePoint>,
    light: Option<LightTruth>,
    mirror: Option<MirrorTruth>,
}

fn finish(spec: &SceneSpec, seed: u64, noise_sigma: f64, draw: Draw) -> SyntheticScene {
    let Draw {
        camera,
        mut doc,
        vanishing_points,
        light,
        mirror,
    } = draw;
    if noise_sigma > 0.0 {
        let mut noise_rng = ChaCha8Rng::seed_from_u64(seed);
        noise_rng.set_stream(1);
        let normal = Normal::new(0.0, noise_sigma).expect("valid sigma");
        let mut jitter = |p: &mut Point2| {
            p.x += normal.sample(&mut noise_rng);
            p.y += normal.sample(&mut noise_rng);
        };
        for g in &mut doc.line_groups {
            for s in &mut g.segments {
                jitter(&mut s.p);
                jitter(&mut s.q);
            }
        }
        for c in &mut doc.shadow_pairs {
            jitter(&mut c.object_point);
            jitter(&mut c.shadow_point);
        }
        for c in &mut doc.reflection_pairs {
            jitter(&mut c.scene_point);
            jitter(&mut c.reflection_point);
        }
    }
    let ground_truth = GroundTruth {
        template: spec.template,
        seed,
        noise_sigma,
        rng: RNG_ALGORITHM.to_string(),
        camera: camera.clone(),
        vanishing_points,
        horizon: horizon(&camera),
        light,
        mirror,
        inject_yaw_deg: spec.inject_yaw_deg,
        inject_shift_px: spec.inject_shift_px,
    };
    SyntheticScene {
        camera,
        annotations: doc,
        ground_truth,
        seed,
        noise_sigma,
    }
}

/// Image of the ground plane's line at infinity.
fn horizon(camera: &CameraModel) -> [f64; 3] {
    let n = camera.direction_to_camera(&Vector3::y());
    let pp = camera.principal_point;
    let line = [n.x, n.y, camera.focal_px * n.z - n.x * pp.x - n.y * pp.y];
    let scale = n.x.hypot(n.y);
    let sign = if line[0] > 0.0 || (line[0] == 0.0 && line[1] > 0.0) {
        1.0
    } else {
        -1.0
    };
    line.map(|v| sign * v / scale)
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Horizontal unit vector at `angle` radians from +Z toward +X.
fn heading_vector(angle: f64) -> Vector3<f64> {
    Vector3::new(angle.sin(), 0.0, angle.cos())
}

/// Randomized camera above the ground, pitched down toward the floor, plus
/// its heading angle.
fn random_camera(rng: &mut ChaCha8Rng) -> Result<(CameraModel, f64), SceneError> {
    let focal = uniform(rng, 700.0, 1100.0);
    let height = uniform(rng, 1.4, 2.2);
    let x = uniform(rng, -0.5, 0.5);
    let pitch = uniform(rng, 15.0, 30.0).to_radians();
    let yaw = uniform(rng, -10.0, 10.0).to_radians();
    let roll = uniform(rng, -4.0, 4.0).to_radians();
    let forward = heading_vector(yaw) * pitch.cos() - Vector3::y() * pitch.sin();
    let camera = CameraModel::looking(
        focal,
        IMAGE_SIZE,
        ScenePoint::new(x, height, 0.0),
        forward,
        roll,
    )?;
    Ok((camera, yaw))
}

/// Ground point seen at a random pixel in the lower middle of the image.
fn ground_anchor(camera: &CameraModel, rng: &mut ChaCha8Rng) -> Result<Vector3<f64>, SceneError> {
    let w = IMAGE_SIZE.width as f64;
    let h = IMAGE_SIZE.height as f64;
    let pixel = Point2::new(uniform(rng, 0.35, 0.65) * w, uniform(rng, 0.6, 0.8) * h);
    let ray = camera.pixel_ray(pixel);
    if ray.y >= -1e-9 {
        return Err(SceneError::InvalidSceneSpec(
            "anchor ray misses the ground".into(),
        ));
    }
    let t = -camera.center().y / ray.y;
    Ok(camera.center() + ray * t)
}

fn image(camera: &CameraModel, p: &Vector3<f64>) -> Result<Point2, SceneError> {
    project(camera, &ScenePoint::from(*p))
}

fn segment(
    camera: &CameraModel,
    a: &Vector3<f64>,
    b: &Vector3<f64>,
) -> Result<LineSegment, SceneError> {
    LineSegment::new(image(camera, a)?, image(camera, b)?)
        .map_err(|_| SceneError::InvalidSceneSpec("segment projects to a point".into()))
}

/// `count` parallel scene lines along `dir`, spaced along `across`.
fn family(
    camera: &CameraModel,
    center: &Vector3<f64>,
    dir: &Vector3<f64>,
    across: &Vector3<f64>,
    count: usize,
) -> Result<Vec<LineSegment>, SceneError> {
    (0..count)
        .map(|k| {
            let offset = (k as f64 - 0.5 * (count as f64 - 1.0)) * TILE_SPACING;
            let mid = center + across * offset;
            segment(
                camera,
                &(mid - dir * HALF_LENGTH),
                &(mid + dir * HALF_LENGTH),
            )
        })
        .collect()
}

fn group(id: &str, parallel_to: Option<&str>, segments: Vec<LineSegment>) -> LineGroup {
    LineGroup {
        id: id.to_string(),
        plane_group: Some("ground".to_string()),
        parallel_to: parallel_to.map(str::to_string),
        segments,
    }
}

fn document(template: SceneTemplate) -> AnnotationDocument {
    AnnotationDocument::new(format!("synthetic:{template}"), IMAGE_SIZE)
}

fn tiled_floor(spec: &SceneSpec, rng: &mut ChaCha8Rng) -> Result<Draw, SceneError> {
    let (camera, heading) = random_camera(rng)?;
    let c = ground_anchor(&camera, rng)?;
    let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let psi = uniform(rng, 30.0, 60.0).to_radians();
    let box_offset = uniform(rng, 1.2, 1.8);
    let a1 = heading + side * psi;
    let quarter = std::f64::consts::FRAC_PI_2;
    let d1 = heading_vector(a1);
    let d2 = heading_vector(a1 - side * quarter);
    let d3 = heading_vector(a1 - side * 0.5 * quarter);
    let up = Vector3::y();

    let n = spec.lines_per_family;
    let mut doc = document(spec.template);
    let mut vps = BTreeMap::new();
    let mut add =
        |doc: &mut AnnotationDocument, g: LineGroup, d: &Vector3<f64>| -> Result<(), SceneError> {
            vps.insert(g.id.clone(), vanishing_point_of_direction(&camera, d)?);
            doc.line_groups.push(g);
            Ok(())
        };
    add(
        &mut doc,
        group("tiles-a", None, family(&camera, &c, &d1, &d2, n)?),
        &d1,
    )?;
    add(
        &mut doc,
        group("tiles-b", None, family(&camera, &c, &d2, &d1, n)?),
        &d2,
    )?;
    let d3_across = up.cross(&d3);
    add(
        &mut doc,
        group("tiles-c", None, family(&camera, &c, &d3, &d3_across, n)?),
        &d3,
    )?;

    // a 0.6 m wide, 0.5 m tall box beside the tiles, its long edges along d1
    let box_center = c + d2 * box_offset;
    let mut edges = Vec::new();
    for h in [0.0, 0.5] {
        for s in [-0.3, 0.3] {
            let mid = box_center + d2 * s + up * h;
            edges.push(segment(&camera, &(mid - d1 * 0.6), &(mid + d1 * 0.6))?);
        }
    }
    add(&mut doc, group("box-a", Some("tiles-a"), edges), &d1)?;

    if let Some(delta) = spec.inject_yaw_deg {
        let delta = delta.to_radians();
        let dc = d1 * delta.cos() + up * delta.sin();
        let counter_center = c - d2 * box_offset;
        let mut edges = Vec::new();
        for (h, s) in [(0.9, -0.3), (0.9, 0.3), (0.95, 0.3)] {
            let mid = counter_center + d2 * s + up * h;
            edges.push(segment(
                &camera,
                &(mid - dc * HALF_LENGTH),
                &(mid + dc * HALF_LENGTH),
            )?);
        }
        add(&mut doc, group("counter", Some("tiles-a"), edges), &dc)?;
    }
    Ok(Draw {
        camera,
        doc,
        vanishing_points: vps,
        light: None,
        mirror: None,
    })
}

/// Top corners of an axis-rotated cube standing on the ground: two
/// diagonally opposite corners.
fn cube_corners(center: &Vector3<f64>, size: f64, rotation: f64) -> [Vector3<f64>; 2] {
    let u = heading_vector(rotation) * (0.5 * size);
    let v = heading_vector(rotation + std::f64::consts::FRAC_PI_2) * (0.5 * size);
    let top = center + Vector3::y() * size;
    [top + u + v, top - u - v]
}

/// Ground positions for three objects, spread sideways around the anchor.
fn object_sites(
    anchor: &Vector3<f64>,
    heading: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<(Vector3<f64>, f64, f64)> {
    let across = heading_vector(heading + std::f64::consts::FRAC_PI_2);
    let along = heading_vector(heading);
    (0..3)
        .map(|k| {
            let lateral = (k as f64 - 1.0) * 1.1 + uniform(rng, -0.2, 0.2);
            let depth = uniform(rng, -0.5, 0.8);
            let size = uniform(rng, 0.4, 0.8);
            let rotation = uniform(rng, 0.0, std::f64::consts::PI);
            (anchor + across * lateral + along * depth, size, rotation)
        })
        .collect()
}

/// Moves `p` by `shift` pixels perpendicular to the line from `anchor`.
fn perpendicular_shift(anchor: Point2, p: Point2, shift: f64) -> Point2 {
    let d = (p - anchor).normalized().unwrap_or(Point2::new(1.0, 0.0));
    p + Point2::new(-d.y, d.x).scale(shift)
}

/// Pair annotations must be visible: both points inside the image and far
/// enough apart to define a direction.
fn check_pair(a: Point2, b: Point2) -> Result<(), SceneError> {
    let inside = |p: Point2| {
        (0.0..=IMAGE_SIZE.width as f64).contains(&p.x)
            && (0.0..=IMAGE_SIZE.height as f64).contains(&p.y)
    };
    if !(inside(a) && inside(b)) {
        return Err(SceneError::InvalidSceneSpec(
            "pair point falls outside the image".into(),
        ));
    }
    if a.distance(&b) < MIN_PAIR_SEPARATION_PX {
        return Err(SceneError::InvalidSceneSpec(
            "pair points too close in the image".into(),
        ));
    }
    Ok(())
}

fn place_light(
    placement: LightPlacement,
    camera: &CameraModel,
    heading: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PointLight, SceneError> {
    let center = camera.center();
    let lateral = heading_vector(heading + std::f64::consts::FRAC_PI_2);
    let sun = |azimuth: f64, rng: &mut ChaCha8Rng| {
        let elevation = uniform(rng, 25.0, 55.0).to_radians();
        let toward = heading_vector(azimuth) * elevation.cos() + Vector3::y() * elevation.sin();
        PointLight::directional(-toward)
    };
    match placement {
        LightPlacement::FrontPositional => {
            let ahead = uniform(rng, 6.0, 12.0);
            let side = uniform(rng, -3.0, 3.0);
            let mut p = center + heading_vector(heading) * ahead + lateral * side;
            p.y = uniform(rng, 4.0, 8.0);
            Ok(PointLight::Positional { position: p.into() })
        }
        LightPlacement::BehindPositional => {
            let behind = uniform(rng, 2.0, 5.0);
            let side = uniform(rng, -2.0, 2.0);
            let mut p = center - heading_vector(heading) * behind + lateral * side;
            p.y = uniform(rng, 3.0, 6.0);
            let position = ScenePoint::from(p);
            if camera.to_camera(&position).z > -0.5 {
                return Err(SceneError::InvalidSceneSpec(
                    "lamp is not behind the camera".into(),
                ));
            }
            Ok(PointLight::Positional { position })
        }
        // rays along the camera's image-down axis
        LightPlacement::Overhead => {
            PointLight::directional(camera.rotation().transpose() * Vector3::y())
        }
        LightPlacement::FrontDirectional => sun(heading + uniform(rng, -0.7, 0.7), rng),
        LightPlacement::BehindDirectional => sun(
            heading + std::f64::consts::PI + uniform(rng, -0.7, 0.7),
            rng,
        ),
    }
}

fn light_truth(
    camera: &CameraModel,
    source: PointLight,
    placement: LightPlacement,
) -> Result<LightTruth, SceneError> {
    let (projection, depth) = match source {
        PointLight::Positional { position } => {
            let depth = camera.to_camera(&position).z / camera.to_camera(&position).norm();
            (
                project_homogeneous(camera, &position).ok_or(SceneError::DegenerateLight)?,
                depth,
            )
        }
        PointLight::Directional { direction } => {
            let toward = -Vector3::from(direction).normalize();
            let depth = camera.direction_to_camera(&toward).z;
            (vanishing_point_of_direction(camera, &toward)?, depth)
        }
    };
    let hypothesis = if projection.is_at_infinity() {
        LightHypothesis::AtInfinity
    } else if depth > 0.0 {
        LightHypothesis::FrontOfCamera
    } else {
        LightHypothesis::BehindCamera
    };
    Ok(LightTruth {
        source,
        projection,
        hypothesis,
        placement,
    })
}

fn cubes_shadows(spec: &SceneSpec, rng: &mut ChaCha8Rng) -> Result<Draw, SceneError> {
    let (camera, heading) = random_camera(rng)?;
    let anchor = ground_anchor(&camera, rng)?;
    let placement = match spec.light {
        Some(p) => p,
        None => [
            LightPlacement::FrontPositional,
            LightPlacement::BehindPositional,
            LightPlacement::Overhead,
        ][rng.random_range(0..3)],
    };
    let sites = object_sites(&anchor, heading, rng);
    let source = place_light(placement, &camera, heading, rng)?;
    let light = light_truth(&camera, source, placement)?;

    let mut doc = document(spec.template);
    for (k, (center, size, rotation)) in sites.iter().enumerate() {
        for (j, corner) in cube_corners(center, *size, *rotation).iter().enumerate() {
            let shadow = cast_shadow_point(&source, &ScenePoint::from(*corner), &Plane::ground())?;
            let object_px = image(&camera, corner)?;
            let shadow_px = project(&camera, &shadow)?;
            check_pair(object_px, shadow_px)?;
            doc.shadow_pairs.push(ShadowConstraint::new(
                format!("cube{}-{}", k + 1, j + 1),
                object_px,
                shadow_px,
            ));
        }
    }
    if let Some(shift) = spec.inject_shift_px {
        let c = &mut doc.shadow_pairs[0];
        c.shadow_point = perpendicular_shift(c.object_point, c.shadow_point, shift);
    }
    Ok(Draw {
        camera,
        doc,
        vanishing_points: BTreeMap::new(),
        light: Some(light),
        mirror: None,
    })
}

fn mirror_boxes(spec: &SceneSpec, rng: &mut ChaCha8Rng) -> Result<Draw, SceneError> {
    let (camera, heading) = random_camera(rng)?;
    let anchor = ground_anchor(&camera, rng)?;
    let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let tilt = uniform(rng, 25.0, 55.0).to_radians();
    let normal = heading_vector(heading + std::f64::consts::PI + side * tilt);
    let tangent = Vector3::y().cross(&normal);
    let mirror_origin = anchor + normal * -1.0;
    let mirror = Plane::new(mirror_origin.into(), normal)?;

    let mut doc = document(spec.template);
    for k in 0..3 {
        let offset = uniform(rng, 0.6, 1.5);
        let along = (k as f64 - 1.0) * 1.0 + uniform(rng, -0.2, 0.2);
        let size = uniform(rng, 0.3, 0.6);
        let rotation = uniform(rng, 0.0, std::f64::consts::PI);
        let center = mirror_origin + normal * offset + tangent * along;
        for (j, corner) in cube_corners(&center, size, rotation).iter().enumerate() {
            let reflected = reflect_point(&mirror, &ScenePoint::from(*corner));
            let scene_px = image(&camera, corner)?;
            let reflection_px = project(&camera, &reflected)?;
            check_pair(scene_px, reflection_px)?;
            doc.reflection_pairs.push(ReflectionConstraint::new(
                format!("box{}-{}", k + 1, j + 1),
                scene_px,
                reflection_px,
            ));
        }
    }
    if let Some(shift) = spec.inject_shift_px {
        let c = &mut doc.reflection_pairs[0];
        c.reflection_point = perpendicular_shift(c.scene_point, c.reflection_point, shift);
    }
    let truth = MirrorTruth {
        plane: mirror,
        normal_vanishing_point: vanishing_point_of_direction(&camera, &normal)?,
    };
    Ok(Draw {
        camera,
        doc,
        vanishing_points: BTreeMap::new(),
        light: None,
        mirror: Some(truth),
    })
}
