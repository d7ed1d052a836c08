//! Cast-shadow consistency.
//!
//! Every line through an object point and its cast-shadow point passes
//! through the image of the light source. Where that image falls depends on
//! the light: in front of the camera it lies beyond the object on each
//! shadow→object ray, behind the camera it lies beyond the shadow on each
//! object→shadow ray, and in the camera's plane it is at infinity and the
//! constraint lines are parallel.

use serde::{Deserialize, Serialize};

use crate::geometry::{
    estimate_vanishing_point, parallel_bundle, segment_to_normal_form, ConsistencyVerdict,
    GeometryError, LineNormalForm, LineSegment, Point2, ProjectivePoint, VanishingPointClass,
    Verdict, KAPPA_MAX, THETA_TOL_DEG,
};

/// Slack on the shadow→object ray parameter for the side test.
pub const RAY_SIDE_SLACK: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowConstraint {
    pub label: String,
    pub object_point: Point2,
    pub shadow_point: Point2,
}

impl ShadowConstraint {
    pub fn new(label: impl Into<String>, object_point: Point2, shadow_point: Point2) -> Self {
        Self {
            label: label.into(),
            object_point,
            shadow_point,
        }
    }

    /// Segment from the shadow point to the object point.
    pub fn segment(&self) -> Result<LineSegment, GeometryError> {
        LineSegment::new(self.shadow_point, self.object_point)
            .map_err(|_| GeometryError::DegenerateConstraint)
    }

    /// Position of `p`'s projection along the shadow→object ray, with the
    /// shadow at 0 and the object at 1.
    pub fn ray_parameter(&self, p: Point2) -> f64 {
        let axis = self.object_point - self.shadow_point;
        (p - self.shadow_point).dot(&axis) / axis.dot(&axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LightHypothesis {
    FrontOfCamera,
    BehindCamera,
    AtInfinity,
}

impl LightHypothesis {
    pub const ALL: [LightHypothesis; 3] = [
        LightHypothesis::FrontOfCamera,
        LightHypothesis::BehindCamera,
        LightHypothesis::AtInfinity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LightHypothesis::FrontOfCamera => "front-of-camera",
            LightHypothesis::BehindCamera => "behind-camera",
            LightHypothesis::AtInfinity => "at-infinity",
        }
    }
}

/// How one light hypothesis fared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisDetail {
    pub hypothesis: LightHypothesis,
    pub admissible: bool,
    #[serde(with = "crate::nonfinite")]
    pub rms_residual: f64,
    /// Constraints that break the hypothesis' anchoring rule (or, for
    /// `at-infinity`, that deviate from the common direction by more than
    /// the angular tolerance).
    pub violations: usize,
}

/// Which half of the image (split at the horizontal midline) holds the
/// projected light. Image rows grow downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageHalf {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightSourceEstimate {
    pub hypothesis: LightHypothesis,
    pub light_projection: ProjectivePoint,
    #[serde(with = "crate::nonfinite")]
    pub rms_residual: f64,
    pub side_violations: usize,
    pub verdict: ConsistencyVerdict,
    /// Always three entries, in the order front, behind, at-infinity.
    pub per_hypothesis_detail: Vec<HypothesisDetail>,
    #[serde(with = "crate::nonfinite")]
    pub condition_number: f64,
}

impl LightSourceEstimate {
    /// Informational: the image half containing a finite light projection.
    pub fn image_half(&self, image_height: f64) -> Option<ImageHalf> {
        let p = self.light_projection.as_finite()?;
        Some(if p.y < 0.5 * image_height {
            ImageHalf::Upper
        } else {
            ImageHalf::Lower
        })
    }
}

/// Infinite line through the shadow and object points, anchored at the
/// shadow point.
pub fn constraint_line(c: &ShadowConstraint) -> Result<LineNormalForm, GeometryError> {
    segment_to_normal_form(&c.segment()?)
}

/// Evaluates the three light hypotheses and selects the best admissible one.
pub fn analyze_shadows(
    constraints: &[ShadowConstraint],
    tolerance: f64,
) -> Result<LightSourceEstimate, GeometryError> {
    if constraints.len() < 2 {
        return Err(GeometryError::InsufficientConstraints {
            need: 2,
            have: constraints.len(),
        });
    }
    let segments = constraints
        .iter()
        .map(ShadowConstraint::segment)
        .collect::<Result<Vec<_>, _>>()?;
    let m = constraints.len();
    let estimate = estimate_vanishing_point(&segments)?;
    let bundle = parallel_bundle(&segments)?;

    let finite_light = match estimate.classification {
        VanishingPointClass::Finite => estimate.location.as_finite(),
        _ => None,
    };
    let (front_violations, behind_violations) = match finite_light {
        Some(light) => constraints.iter().fold((0, 0), |(f, b), c| {
            let t = c.ray_parameter(light);
            (
                f + usize::from(t < 1.0 - RAY_SIDE_SLACK),
                b + usize::from(t > RAY_SIDE_SLACK),
            )
        }),
        None => (m, m),
    };
    let finite_rms = if finite_light.is_some() {
        estimate.rms_residual
    } else {
        f64::INFINITY
    };
    let parallel_violations = bundle
        .residuals
        .iter()
        .zip(&segments)
        .filter(|(r, s)| (2.0 * **r / s.length()).min(1.0).asin().to_degrees() > THETA_TOL_DEG)
        .count();
    let details = vec![
        HypothesisDetail {
            hypothesis: LightHypothesis::FrontOfCamera,
            admissible: finite_light.is_some() && front_violations == 0,
            rms_residual: finite_rms,
            violations: front_violations,
        },
        HypothesisDetail {
            hypothesis: LightHypothesis::BehindCamera,
            admissible: finite_light.is_some() && behind_violations == 0,
            rms_residual: finite_rms,
            violations: behind_violations,
        },
        HypothesisDetail {
            hypothesis: LightHypothesis::AtInfinity,
            admissible: bundle.max_deviation_deg <= THETA_TOL_DEG,
            rms_residual: bundle.rms(),
            violations: parallel_violations,
        },
    ];

    let prefer_infinity = estimate.condition_number > KAPPA_MAX;
    let rank = |d: &HypothesisDetail| {
        let tie = match d.hypothesis {
            LightHypothesis::AtInfinity if prefer_infinity => 0,
            LightHypothesis::FrontOfCamera => 1,
            LightHypothesis::BehindCamera => 2,
            LightHypothesis::AtInfinity => 3,
        };
        (!d.admissible, d.violations, d.rms_residual, tie)
    };
    let selected = details
        .iter()
        .min_by(|a, b| {
            let (ka, kb) = (rank(a), rank(b));
            ka.0.cmp(&kb.0)
                .then_with(|| {
                    if ka.0 {
                        ka.1.cmp(&kb.1)
                    } else {
                        std::cmp::Ordering::Equal
                    }
                })
                .then_with(|| ka.2.total_cmp(&kb.2))
                .then_with(|| ka.3.cmp(&kb.3))
        })
        .expect("three hypotheses")
        .clone();

    let (light_projection, residuals) = match selected.hypothesis {
        LightHypothesis::AtInfinity => (
            ProjectivePoint::at_infinity(bundle.direction.x, bundle.direction.y)
                .ok_or(GeometryError::DegenerateConfiguration)?,
            bundle.residuals.clone(),
        ),
        _ => match finite_light {
            Some(p) => (
                ProjectivePoint::finite(p),
                estimate.per_line_residuals.clone(),
            ),
            None => (estimate.location, estimate.per_line_residuals.clone()),
        },
    };
    let verdict = if estimate.classification == VanishingPointClass::Degenerate
        && selected.hypothesis != LightHypothesis::AtInfinity
    {
        ConsistencyVerdict::indeterminate(tolerance)
    } else {
        let mut v = ConsistencyVerdict::from_score(selected.rms_residual, tolerance, residuals);
        if !selected.admissible {
            v.verdict = Verdict::Inconsistent;
        }
        v
    };
    Ok(LightSourceEstimate {
        hypothesis: selected.hypothesis,
        light_projection,
        rms_residual: selected.rms_residual,
        side_violations: if selected.admissible {
            0
        } else {
            selected.violations
        },
        verdict,
        per_hypothesis_detail: details,
        condition_number: estimate.condition_number,
    })
}
