//! Planar-mirror consistency.
//!
//! Lines joining scene points to their mirror reflections are parallel in
//! 3-D (all along the mirror normal), so in the image they must meet at a
//! single point: the vanishing point of the mirror-normal direction. Unlike
//! shadows there is no anchoring rule; full lines are used.

use serde::{Deserialize, Serialize};

use crate::geometry::{
    estimate_vanishing_point, parallel_bundle, ConsistencyVerdict, GeometryError, LineSegment,
    Point2, ProjectivePoint, VanishingPointClass, THETA_TOL_DEG,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectionConstraint {
    pub label: String,
    pub scene_point: Point2,
    pub reflection_point: Point2,
}

impl ReflectionConstraint {
    pub fn new(label: impl Into<String>, scene_point: Point2, reflection_point: Point2) -> Self {
        Self {
            label: label.into(),
            scene_point,
            reflection_point,
        }
    }

    /// The connecting segment with endpoints in lexicographic order, so the
    /// result does not depend on which end is the reflection.
    pub fn segment(&self) -> Result<LineSegment, GeometryError> {
        let (a, b) = (self.scene_point, self.reflection_point);
        let (p, q) = if (a.x, a.y) <= (b.x, b.y) {
            (a, b)
        } else {
            (b, a)
        };
        LineSegment::new(p, q).map_err(|_| GeometryError::DegenerateConstraint)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MirrorConsistencyResult {
    /// Estimated vanishing point of the mirror-normal direction.
    pub intersection: ProjectivePoint,
    #[serde(with = "crate::nonfinite")]
    pub rms_residual: f64,
    pub verdict: ConsistencyVerdict,
    pub per_constraint_residuals: Vec<f64>,
    /// Set when only two pairs were given: two lines always intersect.
    pub weakly_constrained: bool,
    #[serde(with = "crate::nonfinite")]
    pub condition_number: f64,
}

/// Tests whether all object/reflection lines share a common intersection.
///
/// When every line lies within the angular tolerance of a common direction,
/// the at-infinity explanation competes with the finite least-squares point
/// and the smaller RMS residual wins.
pub fn analyze_reflections(
    constraints: &[ReflectionConstraint],
    tolerance: f64,
) -> Result<MirrorConsistencyResult, GeometryError> {
    if constraints.len() < 2 {
        return Err(GeometryError::InsufficientConstraints {
            need: 2,
            have: constraints.len(),
        });
    }
    let segments = constraints
        .iter()
        .map(ReflectionConstraint::segment)
        .collect::<Result<Vec<_>, _>>()?;
    let estimate = estimate_vanishing_point(&segments)?;
    let weakly_constrained = constraints.len() == 2;

    if estimate.classification == VanishingPointClass::Degenerate {
        return Ok(MirrorConsistencyResult {
            intersection: estimate.location,
            rms_residual: estimate.rms_residual,
            verdict: ConsistencyVerdict::indeterminate(tolerance),
            per_constraint_residuals: estimate.per_line_residuals,
            weakly_constrained,
            condition_number: estimate.condition_number,
        });
    }

    let (intersection, residuals, rms) = match estimate.classification {
        VanishingPointClass::Finite => {
            let bundle = parallel_bundle(&segments)?;
            if bundle.max_deviation_deg <= THETA_TOL_DEG && bundle.rms() < estimate.rms_residual {
                let dir = ProjectivePoint::at_infinity(bundle.direction.x, bundle.direction.y)
                    .ok_or(GeometryError::DegenerateConfiguration)?;
                let rms = bundle.rms();
                (dir, bundle.residuals, rms)
            } else {
                (
                    estimate.location,
                    estimate.per_line_residuals,
                    estimate.rms_residual,
                )
            }
        }
        _ => (
            estimate.location,
            estimate.per_line_residuals,
            estimate.rms_residual,
        ),
    };
    Ok(MirrorConsistencyResult {
        intersection,
        rms_residual: rms,
        verdict: ConsistencyVerdict::from_score(rms, tolerance, residuals.clone()),
        per_constraint_residuals: residuals,
        weakly_constrained,
        condition_number: estimate.condition_number,
    })
}
