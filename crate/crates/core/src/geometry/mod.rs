//! Pure 2-D projective geometry: line parameterizations, intersections,
//! least-squares vanishing points and lines, and consistency verdicts.

mod line;
mod point;
mod vanishing;
mod verdict;

use thiserror::Error;

pub use line::{
    intersect_two_lines, parallel_bundle, perpendicular_distance, segment_to_normal_form,
    LineNormalForm, LineSegment, ParallelBundle, EPS_DETERMINANT, EPS_SEGMENT,
};
pub use point::{Point2, ProjectivePoint, EPS_HOMOGENEOUS};
pub use vanishing::{
    estimate_vanishing_point, fit_vanishing_line, VanishingLineEstimate, VanishingPointClass,
    VanishingPointEstimate, KAPPA_MAX,
};
pub use verdict::{
    check_point_on_line, check_shared_vanishing_point, ConsistencyVerdict,
    SharedVanishingPointCheck, Verdict, DEFAULT_TOLERANCE_PX,
};

/// Angular tolerance, in degrees, for treating directions as parallel.
pub const THETA_TOL_DEG: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("insufficient constraints: need at least {need}, got {have}")]
    InsufficientConstraints { need: usize, have: usize },
    #[error("points at infinity disagree on direction")]
    InconsistentDirections,
    #[error("degenerate configuration")]
    DegenerateConfiguration,
    #[error("degenerate constraint: points coincide")]
    DegenerateConstraint,
}
