use serde::{Deserialize, Serialize};

use super::{canonical, AnnotationError};
use crate::geometry::{
    ConsistencyVerdict, SharedVanishingPointCheck, VanishingLineEstimate, VanishingPointEstimate,
    Verdict,
};
use crate::reflection::MirrorConsistencyResult;
use crate::shadow::{ImageHalf, LightSourceEstimate};

/// One line of the flat check list; every detailed entry below has exactly
/// one summary here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSummary {
    pub id: String,
    pub verdict: Verdict,
    #[serde(with = "crate::nonfinite")]
    pub score: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupVanishingPoint {
    pub group: String,
    pub estimate: Option<VanishingPointEstimate>,
    pub verdict: ConsistencyVerdict,
    pub weakly_constrained: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanishingLineEntry {
    pub plane_group: String,
    /// Groups whose vanishing points define the line.
    pub members: Vec<String>,
    pub estimate: Option<VanishingLineEstimate>,
    pub verdict: ConsistencyVerdict,
    pub weakly_constrained: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointOnLineCheck {
    pub group: String,
    pub plane_group: String,
    pub verdict: ConsistencyVerdict,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharedVanishingPointEntry {
    pub group: String,
    pub reference: String,
    pub result: Option<SharedVanishingPointCheck>,
    pub verdict: ConsistencyVerdict,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowReport {
    pub pair_count: usize,
    pub estimate: Option<LightSourceEstimate>,
    pub image_half: Option<ImageHalf>,
    pub verdict: ConsistencyVerdict,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectionReport {
    pub pair_count: usize,
    pub result: Option<MirrorConsistencyResult>,
    pub verdict: ConsistencyVerdict,
    pub note: Option<String>,
}

/// Everything computed for one annotation document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub tool_version: String,
    /// `sha256:` digest of the canonical annotation document.
    pub input_digest: String,
    pub tolerance_px: f64,
    pub overall_verdict: Verdict,
    pub checks: Vec<CheckSummary>,
    pub vanishing_points: Vec<GroupVanishingPoint>,
    pub vanishing_lines: Vec<VanishingLineEntry>,
    pub point_on_line: Vec<PointOnLineCheck>,
    pub shared_vanishing_points: Vec<SharedVanishingPointEntry>,
    pub shadows: Option<ShadowReport>,
    pub reflections: Option<ReflectionReport>,
}

impl AnalysisReport {
    /// One `CHECK <id> <verdict> score=<px> tol=<px>` line per check.
    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "CHECK {} {} score={} tol={}",
                    c.id,
                    c.verdict,
                    canonical::format_number(c.score),
                    canonical::format_number(c.tolerance)
                )
            })
            .collect()
    }

    pub fn failing_checks(&self) -> impl Iterator<Item = &CheckSummary> {
        self.checks
            .iter()
            .filter(|c| c.verdict == Verdict::Inconsistent)
    }
}

/// Canonical report text: byte-identical for equal reports.
pub fn write_report(report: &AnalysisReport) -> String {
    canonical::to_canonical_string(report)
}

pub fn parse_report(text: &str) -> Result<AnalysisReport, AnnotationError> {
    super::deserialize(text)
}
