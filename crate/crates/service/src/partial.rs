//! Single-kind analyses for incremental feedback while annotating.
//!
//! Each request carries only the constraints of one kind. Results are cut
//! from a full analysis of an equivalent document, so every number matches
//! what `/api/analyze` reports for the same constraints.

use pf_core::analysis::analyze_document;
use pf_core::annotation::{
    AnnotationDocument, AnnotationError, CheckSummary, GroupVanishingPoint, ImageSize, LineGroup,
    PointOnLineCheck, ReflectionReport, ShadowReport, SharedVanishingPointEntry,
    VanishingLineEntry,
};
use pf_core::reflection::ReflectionConstraint;
use pf_core::shadow::ShadowConstraint;
use pf_core::{Verdict, TOOL_VERSION};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PartialRequest {
    VanishingPoints {
        image_size: ImageSize,
        #[serde(default)]
        tolerance_px: Option<f64>,
        line_groups: Vec<LineGroup>,
    },
    VanishingLine {
        image_size: ImageSize,
        #[serde(default)]
        tolerance_px: Option<f64>,
        line_groups: Vec<LineGroup>,
    },
    Shadows {
        image_size: ImageSize,
        #[serde(default)]
        tolerance_px: Option<f64>,
        pairs: Vec<ShadowConstraint>,
    },
    Reflections {
        image_size: ImageSize,
        #[serde(default)]
        tolerance_px: Option<f64>,
        pairs: Vec<ReflectionConstraint>,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PartialResponse {
    Ok {
        kind: &'static str,
        verdict: Verdict,
        checks: Vec<CheckSummary>,
        result: Box<PartialResult>,
    },
    InsufficientConstraints {
        kind: &'static str,
        need: usize,
        have: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum PartialResult {
    VanishingPoints {
        vanishing_points: Vec<GroupVanishingPoint>,
    },
    VanishingLine {
        vanishing_points: Vec<GroupVanishingPoint>,
        vanishing_lines: Vec<VanishingLineEntry>,
        point_on_line: Vec<PointOnLineCheck>,
        shared_vanishing_points: Vec<SharedVanishingPointEntry>,
    },
    Shadows {
        shadows: Option<ShadowReport>,
    },
    Reflections {
        reflections: Option<ReflectionReport>,
    },
}

impl PartialRequest {
    pub fn kind(&self) -> &'static str {
        match self {
            PartialRequest::VanishingPoints { .. } => "vanishing-points",
            PartialRequest::VanishingLine { .. } => "vanishing-line",
            PartialRequest::Shadows { .. } => "shadows",
            PartialRequest::Reflections { .. } => "reflections",
        }
    }

    fn document(&self) -> AnnotationDocument {
        let (size, tol) = match self {
            PartialRequest::VanishingPoints {
                image_size,
                tolerance_px,
                ..
            }
            | PartialRequest::VanishingLine {
                image_size,
                tolerance_px,
                ..
            }
            | PartialRequest::Shadows {
                image_size,
                tolerance_px,
                ..
            }
            | PartialRequest::Reflections {
                image_size,
                tolerance_px,
                ..
            } => (*image_size, *tolerance_px),
        };
        let mut doc = AnnotationDocument::new("partial", size);
        doc.tolerance_px = tol;
        match self {
            PartialRequest::VanishingPoints { line_groups, .. } => {
                // each group on its own, with no cross-group checks
                doc.line_groups = line_groups
                    .iter()
                    .map(|g| LineGroup {
                        plane_group: None,
                        parallel_to: None,
                        ..g.clone()
                    })
                    .collect();
            }
            PartialRequest::VanishingLine { line_groups, .. } => {
                doc.line_groups = line_groups.clone()
            }
            PartialRequest::Shadows { pairs, .. } => doc.shadow_pairs = pairs.clone(),
            PartialRequest::Reflections { pairs, .. } => doc.reflection_pairs = pairs.clone(),
        }
        doc
    }

    /// `(need, have)` for the minimum constraint count of this kind.
    fn constraint_count(&self) -> (usize, usize) {
        match self {
            PartialRequest::VanishingPoints { line_groups, .. } => (
                2,
                line_groups
                    .iter()
                    .map(|g| g.segments.len())
                    .min()
                    .unwrap_or(0),
            ),
            PartialRequest::VanishingLine { line_groups, .. } => {
                let defining = line_groups
                    .iter()
                    .filter(|g| {
                        g.plane_group.is_some() && g.parallel_to.is_none() && g.segments.len() >= 2
                    })
                    .count();
                (2, defining)
            }
            PartialRequest::Shadows { pairs, .. } => (2, pairs.len()),
            PartialRequest::Reflections { pairs, .. } => (2, pairs.len()),
        }
    }
}

/// Validates the constraints and analyzes them, or reports how many more
/// are needed.
pub fn analyze_partial(request: &PartialRequest) -> Result<PartialResponse, AnnotationError> {
    let doc = request.document();
    doc.validate()?;
    let kind = request.kind();
    let (need, have) = request.constraint_count();
    if have < need {
        let unit = match request {
            PartialRequest::VanishingPoints { .. } => "segments per group",
            PartialRequest::VanishingLine { .. } => "line groups in a plane group",
            PartialRequest::Shadows { .. } | PartialRequest::Reflections { .. } => "pairs",
        };
        return Ok(PartialResponse::InsufficientConstraints {
            kind,
            need,
            have,
            message: format!("insufficient constraints: need ≥ {need} {unit}, have {have}"),
        });
    }

    let report = analyze_document(&doc, None, TOOL_VERSION);
    let result = match request {
        PartialRequest::VanishingPoints { .. } => PartialResult::VanishingPoints {
            vanishing_points: report.vanishing_points,
        },
        PartialRequest::VanishingLine { .. } => PartialResult::VanishingLine {
            vanishing_points: report.vanishing_points,
            vanishing_lines: report.vanishing_lines,
            point_on_line: report.point_on_line,
            shared_vanishing_points: report.shared_vanishing_points,
        },
        PartialRequest::Shadows { .. } => PartialResult::Shadows {
            shadows: report.shadows,
        },
        PartialRequest::Reflections { .. } => PartialResult::Reflections {
            reflections: report.reflections,
        },
    };
    Ok(PartialResponse::Ok {
        kind,
        verdict: report.overall_verdict,
        checks: report.checks,
        result: Box::new(result),
    })
}
