use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{canonical, AnnotationError};
use crate::geometry::{LineSegment, Point2};
use crate::reflection::ReflectionConstraint;
use crate::shadow::ShadowConstraint;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSize {
    pub width: u32,
    pub height: u32,
}

impl ImageSize {
    pub fn max_dim(&self) -> f64 {
        self.width.max(self.height) as f64
    }
}

/// A family of segments annotated as parallel in the scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineGroup {
    pub id: String,
    /// Groups sharing a label lie on one plane or on parallel planes, so
    /// their vanishing points share a vanishing line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_group: Option<String>,
    /// Claims this group is parallel in the scene to the named group. Such
    /// groups are checked against the reference's vanishing point and
    /// against their plane group's vanishing line, and do not help define
    /// that line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallel_to: Option<String>,
    pub segments: Vec<LineSegment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationDocument {
    pub schema_version: String,
    pub image_ref: String,
    pub image_size: ImageSize,
    #[serde(default)]
    pub line_groups: Vec<LineGroup>,
    #[serde(default)]
    pub shadow_pairs: Vec<ShadowConstraint>,
    #[serde(default)]
    pub reflection_pairs: Vec<ReflectionConstraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance_px: Option<f64>,
}

impl AnnotationDocument {
    pub fn new(image_ref: impl Into<String>, image_size: ImageSize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            image_ref: image_ref.into(),
            image_size,
            line_groups: vec![],
            shadow_pairs: vec![],
            reflection_pairs: vec![],
            tolerance_px: None,
        }
    }

    pub fn group(&self, id: &str) -> Option<&LineGroup> {
        self.line_groups.iter().find(|g| g.id == id)
    }

    /// Checks every document invariant: schema version, unique ids,
    /// resolvable references, non-degenerate geometry and coordinate bounds.
    pub fn validate(&self) -> Result<(), AnnotationError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(AnnotationError::schema(
                "schema_version",
                format!(
                    "unsupported schema version {:?}, expected {SCHEMA_VERSION:?}",
                    self.schema_version
                ),
            ));
        }
        if self.image_size.width == 0 || self.image_size.height == 0 {
            return Err(AnnotationError::validation(
                "image_size",
                "image dimensions must be positive",
            ));
        }
        if let Some(t) = self.tolerance_px {
            if !(t.is_finite() && t > 0.0) {
                return Err(AnnotationError::validation(
                    "tolerance_px",
                    "tolerance must be positive",
                ));
            }
        }
        unique(self.line_groups.iter().map(|g| g.id.as_str()), |i| {
            format!("line_groups[{i}].id")
        })?;
        unique(self.shadow_pairs.iter().map(|c| c.label.as_str()), |i| {
            format!("shadow_pairs[{i}].label")
        })?;
        unique(
            self.reflection_pairs.iter().map(|c| c.label.as_str()),
            |i| format!("reflection_pairs[{i}].label"),
        )?;

        let bounds = Bounds::new(self.image_size);
        for (i, g) in self.line_groups.iter().enumerate() {
            if g.id.is_empty() {
                return Err(AnnotationError::schema(
                    format!("line_groups[{i}].id"),
                    "id must not be empty",
                ));
            }
            if let Some(r) = &g.parallel_to {
                if r == &g.id || self.group(r).is_none() {
                    return Err(AnnotationError::validation(
                        format!("line_groups[{i}].parallel_to"),
                        format!("unknown reference group {r:?}"),
                    ));
                }
            }
            for (j, s) in g.segments.iter().enumerate() {
                let field = format!("line_groups[{i}].segments[{j}]");
                bounds.check(&field, &[s.p, s.q])?;
                s.validate().map_err(|_| {
                    AnnotationError::validation(field, "segment endpoints coincide")
                })?;
            }
        }
        for (i, c) in self.shadow_pairs.iter().enumerate() {
            let field = format!("shadow_pairs[{i}]");
            bounds.check(&field, &[c.object_point, c.shadow_point])?;
            c.segment().map_err(|_| {
                AnnotationError::validation(field, "object and shadow points coincide")
            })?;
        }
        for (i, c) in self.reflection_pairs.iter().enumerate() {
            let field = format!("reflection_pairs[{i}]");
            bounds.check(&field, &[c.scene_point, c.reflection_point])?;
            c.segment().map_err(|_| {
                AnnotationError::validation(field, "scene and reflection points coincide")
            })?;
        }
        Ok(())
    }

    /// Canonical JSON text.
    pub fn to_canonical_json(&self) -> String {
        canonical::to_canonical_string(self)
    }
}

fn unique<'a>(
    ids: impl Iterator<Item = &'a str>,
    field: impl Fn(usize) -> String,
) -> Result<(), AnnotationError> {
    let mut seen = HashSet::new();
    for (i, id) in ids.enumerate() {
        if !seen.insert(id) {
            return Err(AnnotationError::schema(
                field(i),
                format!("duplicate id {id:?}"),
            ));
        }
    }
    Ok(())
}

/// Annotations may extend past the image (vanishing points often do), up to
/// ten times the larger image dimension on every side.
struct Bounds {
    min: f64,
    max_x: f64,
    max_y: f64,
}

impl Bounds {
    fn new(size: ImageSize) -> Self {
        let margin = 10.0 * size.max_dim();
        Self {
            min: -margin,
            max_x: size.width as f64 + margin,
            max_y: size.height as f64 + margin,
        }
    }

    fn check(&self, field: &str, points: &[Point2]) -> Result<(), AnnotationError> {
        for p in points {
            let ok = p.is_finite()
                && (self.min..=self.max_x).contains(&p.x)
                && (self.min..=self.max_y).contains(&p.y);
            if !ok {
                return Err(AnnotationError::validation(
                    field,
                    format!("coordinate {p} lies too far outside the image"),
                ));
            }
        }
        Ok(())
    }
}

/// Parses and validates an annotation document. Unknown fields are rejected.
pub fn parse_annotations(text: &str) -> Result<AnnotationDocument, AnnotationError> {
    let doc: AnnotationDocument = super::deserialize(text)?;
    doc.validate()?;
    Ok(doc)
}

/// Canonical serialization of a document.
pub fn write_annotations(doc: &AnnotationDocument) -> String {
    doc.to_canonical_json()
}
