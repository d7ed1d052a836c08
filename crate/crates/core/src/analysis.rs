//! Runs every check an annotation document supplies constraints for.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use crate::annotation::{
    write_annotations, AnalysisReport, AnnotationDocument, CheckSummary, GroupVanishingPoint,
    PointOnLineCheck, ReflectionReport, ShadowReport, SharedVanishingPointEntry,
    VanishingLineEntry,
};
use crate::geometry::{
    check_point_on_line, check_shared_vanishing_point, estimate_vanishing_point,
    fit_vanishing_line, ConsistencyVerdict, VanishingLineEstimate, VanishingPointClass,
    VanishingPointEstimate, Verdict, DEFAULT_TOLERANCE_PX,
};
use crate::reflection::analyze_reflections;
use crate::shadow::analyze_shadows;

/// Tolerance precedence: explicit override, then the document's own value,
/// then [`DEFAULT_TOLERANCE_PX`].
pub fn effective_tolerance(doc: &AnnotationDocument, tolerance_override: Option<f64>) -> f64 {
    tolerance_override
        .or(doc.tolerance_px)
        .unwrap_or(DEFAULT_TOLERANCE_PX)
}

/// `sha256:<hex>` of the canonical document text.
pub fn document_digest(doc: &AnnotationDocument) -> String {
    let digest = Sha256::digest(write_annotations(doc).as_bytes());
    format!("sha256:{}", hex::encode(digest))
}

/// Analyzes a validated document. The result depends only on the document,
/// the tolerance and `tool_version`.
pub fn analyze_document(
    doc: &AnnotationDocument,
    tolerance_override: Option<f64>,
    tool_version: &str,
) -> AnalysisReport {
    let tol = effective_tolerance(doc, tolerance_override);
    let mut checks = Vec::new();
    let mut push = |id: String, v: &ConsistencyVerdict| {
        checks.push(CheckSummary {
            id,
            verdict: v.verdict,
            score: v.score,
            tolerance: v.tolerance,
        });
    };

    let mut estimates: BTreeMap<&str, VanishingPointEstimate> = BTreeMap::new();
    let mut vanishing_points = Vec::new();
    for g in &doc.line_groups {
        let entry = match estimate_vanishing_point(&g.segments) {
            Ok(est) => {
                let verdict = ConsistencyVerdict::for_estimate(&est, tol);
                let weak = g.segments.len() == 2;
                estimates.insert(g.id.as_str(), est.clone());
                GroupVanishingPoint {
                    group: g.id.clone(),
                    estimate: Some(est),
                    verdict,
                    weakly_constrained: weak,
                    note: weak.then(|| "two lines always intersect".to_string()),
                }
            }
            Err(e) => GroupVanishingPoint {
                group: g.id.clone(),
                estimate: None,
                verdict: ConsistencyVerdict::indeterminate(tol),
                weakly_constrained: false,
                note: Some(e.to_string()),
            },
        };
        push(format!("vp:{}", g.id), &entry.verdict);
        vanishing_points.push(entry);
    }
    let usable = |id: &str| {
        estimates
            .get(id)
            .filter(|e| e.classification != VanishingPointClass::Degenerate)
            .map(|e| e.location)
    };

    let mut plane_groups: BTreeMap<&str, (Vec<&str>, Vec<&str>)> = BTreeMap::new();
    for g in &doc.line_groups {
        if let Some(pg) = &g.plane_group {
            let (members, dependents) = plane_groups.entry(pg.as_str()).or_default();
            match g.parallel_to {
                None => members.push(g.id.as_str()),
                Some(_) => dependents.push(g.id.as_str()),
            }
        }
    }
    let mut lines: BTreeMap<&str, VanishingLineEstimate> = BTreeMap::new();
    let mut vanishing_lines = Vec::new();
    for (pg, (members, dependents)) in &plane_groups {
        if members.len() < 2 && dependents.is_empty() {
            continue;
        }
        let points: Vec<_> = members.iter().filter_map(|id| usable(id)).collect();
        let entry = match fit_vanishing_line(&points) {
            Ok(est) => {
                let weak = points.len() == 2;
                let verdict = ConsistencyVerdict::from_score(
                    est.rms_residual,
                    tol,
                    est.per_point_residuals.clone(),
                );
                lines.insert(pg, est.clone());
                VanishingLineEntry {
                    plane_group: pg.to_string(),
                    members: members.iter().map(|s| s.to_string()).collect(),
                    estimate: Some(est),
                    verdict,
                    weakly_constrained: weak,
                    note: weak.then(|| "two points always define a line".to_string()),
                }
            }
            Err(e) => VanishingLineEntry {
                plane_group: pg.to_string(),
                members: members.iter().map(|s| s.to_string()).collect(),
                estimate: None,
                verdict: ConsistencyVerdict::indeterminate(tol),
                weakly_constrained: false,
                note: Some(format!("vanishing line needs two independent groups: {e}")),
            },
        };
        push(format!("vline:{pg}"), &entry.verdict);
        vanishing_lines.push(entry);
    }

    let mut point_on_line = Vec::new();
    let mut shared_vanishing_points = Vec::new();
    for g in &doc.line_groups {
        let Some(reference) = &g.parallel_to else {
            continue;
        };
        if let Some(pg) = &g.plane_group {
            let entry = match (usable(&g.id), lines.get(pg.as_str())) {
                (Some(vp), Some(line)) => PointOnLineCheck {
                    group: g.id.clone(),
                    plane_group: pg.clone(),
                    verdict: check_point_on_line(&vp, line, tol),
                    note: None,
                },
                (vp, _) => PointOnLineCheck {
                    group: g.id.clone(),
                    plane_group: pg.clone(),
                    verdict: ConsistencyVerdict::indeterminate(tol),
                    note: Some(if vp.is_none() {
                        "group has no usable vanishing point".to_string()
                    } else {
                        "plane group has no vanishing line".to_string()
                    }),
                },
            };
            push(format!("on-line:{}", g.id), &entry.verdict);
            point_on_line.push(entry);
        }
        let ref_segments = doc
            .group(reference)
            .map(|r| r.segments.as_slice())
            .unwrap_or(&[]);
        let entry = match check_shared_vanishing_point(&g.segments, ref_segments, tol) {
            Ok(result) => SharedVanishingPointEntry {
                group: g.id.clone(),
                reference: reference.clone(),
                verdict: result.verdict.clone(),
                result: Some(result),
                note: None,
            },
            Err(e) => SharedVanishingPointEntry {
                group: g.id.clone(),
                reference: reference.clone(),
                result: None,
                verdict: ConsistencyVerdict::indeterminate(tol),
                note: Some(e.to_string()),
            },
        };
        push(format!("shared-vp:{}~{}", g.id, reference), &entry.verdict);
        shared_vanishing_points.push(entry);
    }

    let shadows = (!doc.shadow_pairs.is_empty()).then(|| {
        let report = match analyze_shadows(&doc.shadow_pairs, tol) {
            Ok(est) => ShadowReport {
                pair_count: doc.shadow_pairs.len(),
                image_half: est.image_half(doc.image_size.height as f64),
                verdict: est.verdict.clone(),
                estimate: Some(est),
                note: None,
            },
            Err(e) => ShadowReport {
                pair_count: doc.shadow_pairs.len(),
                estimate: None,
                image_half: None,
                verdict: ConsistencyVerdict::indeterminate(tol),
                note: Some(e.to_string()),
            },
        };
        push("shadows".to_string(), &report.verdict);
        report
    });

    let reflections = (!doc.reflection_pairs.is_empty()).then(|| {
        let report = match analyze_reflections(&doc.reflection_pairs, tol) {
            Ok(result) => ReflectionReport {
                pair_count: doc.reflection_pairs.len(),
                verdict: result.verdict.clone(),
                note: result
                    .weakly_constrained
                    .then(|| "two lines always intersect".to_string()),
                result: Some(result),
            },
            Err(e) => ReflectionReport {
                pair_count: doc.reflection_pairs.len(),
                result: None,
                verdict: ConsistencyVerdict::indeterminate(tol),
                note: Some(e.to_string()),
            },
        };
        push("reflections".to_string(), &report.verdict);
        report
    });

    let overall_verdict = Verdict::combine(checks.iter().map(|c| c.verdict));
    AnalysisReport {
        tool_version: tool_version.to_string(),
        input_digest: document_digest(doc),
        tolerance_px: tol,
        overall_verdict,
        checks,
        vanishing_points,
        vanishing_lines,
        point_on_line,
        shared_vanishing_points,
        shadows,
        reflections,
    }
}
