//! Perspective-consistency photo forensics.
//!
//! Tests whether the vanishing points, cast shadows and mirror reflections
//! annotated on an image agree with a single pinhole projection:
//!
//! - [`geometry`]: line intersections, least-squares vanishing points and
//!   vanishing lines, consistency verdicts.
//! - [`shadow`]: object/shadow constraints and the projected light source.
//! - [`reflection`]: object/reflection constraints and the mirror-normal
//!   vanishing point.
//! - [`scene`]: a synthetic pinhole scene generator with analytic ground truth.
//! - [`annotation`]: the annotation document format, reports and SVG overlays.
//! - [`analysis`]: runs every applicable check on an annotation document.

pub mod analysis;
pub mod annotation;
pub mod geometry;
pub mod reflection;
pub mod scene;
pub mod shadow;

pub(crate) mod nonfinite;

pub use geometry::{Point2, ProjectivePoint, Verdict};

/// Version string embedded in reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
