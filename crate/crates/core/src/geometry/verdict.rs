use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    estimate_vanishing_point, GeometryError, LineSegment, ProjectivePoint, VanishingLineEstimate,
    VanishingPointClass, VanishingPointEstimate, THETA_TOL_DEG,
};

/// Default consistency threshold in pixels.
pub const DEFAULT_TOLERANCE_PX: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    /// Folds individual verdicts: any inconsistency wins, then any
    /// indeterminate check; an empty set is indeterminate.
    pub fn combine<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
        let mut seen_any = false;
        let mut indeterminate = false;
        for v in verdicts {
            seen_any = true;
            match v {
                Verdict::Inconsistent => return Verdict::Inconsistent,
                Verdict::Indeterminate => indeterminate = true,
                Verdict::Consistent => {}
            }
        }
        if !seen_any || indeterminate {
            Verdict::Indeterminate
        } else {
            Verdict::Consistent
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tolerance-thresholded judgment on a set of geometric constraints.
///
/// `score` is infinite for indeterminate checks and for a point at infinity
/// whose direction disagrees with a vanishing line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyVerdict {
    pub verdict: Verdict,
    #[serde(with = "crate::nonfinite")]
    pub score: f64,
    pub tolerance: f64,
    pub detail: Vec<f64>,
}

impl ConsistencyVerdict {
    pub fn from_score(score: f64, tolerance: f64, detail: Vec<f64>) -> Self {
        let verdict = if score <= tolerance {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        };
        Self {
            verdict,
            score,
            tolerance,
            detail,
        }
    }

    pub fn indeterminate(tolerance: f64) -> Self {
        Self {
            verdict: Verdict::Indeterminate,
            score: f64::INFINITY,
            tolerance,
            detail: vec![],
        }
    }

    /// Verdict for a vanishing-point estimate's own concurrency.
    pub fn for_estimate(est: &VanishingPointEstimate, tolerance: f64) -> Self {
        if est.classification == VanishingPointClass::Degenerate {
            return Self::indeterminate(tolerance);
        }
        Self::from_score(est.rms_residual, tolerance, est.per_line_residuals.clone())
    }

    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }
}

/// Tests whether a vanishing point lies on a vanishing line.
///
/// Finite points are scored by perpendicular distance. A point at infinity
/// is consistent (score 0) when its direction is within [`THETA_TOL_DEG`] of
/// the line's direction; otherwise the score is infinite and the angular
/// deviation in degrees is recorded in `detail`.
pub fn check_point_on_line(
    vp: &ProjectivePoint,
    vline: &VanishingLineEstimate,
    tolerance: f64,
) -> ConsistencyVerdict {
    if let Some(p) = vp.as_finite() {
        let d = vline.distance(p);
        return ConsistencyVerdict::from_score(d, tolerance, vec![d]);
    }
    let dir = vp.direction().expect("point at infinity has a direction");
    let deviation = dir
        .cross(&vline.direction())
        .abs()
        .min(1.0)
        .asin()
        .to_degrees();
    if deviation <= THETA_TOL_DEG {
        ConsistencyVerdict::from_score(0.0, tolerance, vec![deviation])
    } else {
        ConsistencyVerdict {
            verdict: Verdict::Inconsistent,
            score: f64::INFINITY,
            tolerance,
            detail: vec![deviation],
        }
    }
}

/// Result of testing whether two line groups converge on one vanishing point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedVanishingPointCheck {
    /// Joint RMS residual over both groups against the joint estimate.
    pub verdict: ConsistencyVerdict,
    pub joint: VanishingPointEstimate,
    pub estimate_a: VanishingPointEstimate,
    pub estimate_b: VanishingPointEstimate,
    /// Distance between the separate estimates when both are finite.
    pub separation_px: Option<f64>,
    /// Angle between the separate estimates when both are at infinity.
    pub separation_deg: Option<f64>,
}

/// Tests whether two groups of lines share a single vanishing point by
/// refitting over their union.
pub fn check_shared_vanishing_point(
    group_a: &[LineSegment],
    group_b: &[LineSegment],
    tolerance: f64,
) -> Result<SharedVanishingPointCheck, GeometryError> {
    let estimate_a = estimate_vanishing_point(group_a)?;
    let estimate_b = estimate_vanishing_point(group_b)?;
    let union: Vec<LineSegment> = group_a.iter().chain(group_b).copied().collect();
    let joint = estimate_vanishing_point(&union)?;
    let verdict = ConsistencyVerdict::for_estimate(&joint, tolerance);
    let degenerate =
        |e: &VanishingPointEstimate| e.classification == VanishingPointClass::Degenerate;
    let (separation_px, separation_deg) = if degenerate(&estimate_a) || degenerate(&estimate_b) {
        (None, None)
    } else {
        match (
            estimate_a.location.as_finite(),
            estimate_b.location.as_finite(),
        ) {
            (Some(a), Some(b)) => (Some(a.distance(&b)), None),
            (None, None) => {
                let (a, b) = (
                    estimate_a.location.direction().unwrap(),
                    estimate_b.location.direction().unwrap(),
                );
                (None, Some(a.cross(&b).abs().min(1.0).asin().to_degrees()))
            }
            _ => (None, None),
        }
    };
    Ok(SharedVanishingPointCheck {
        verdict,
        joint,
        estimate_a,
        estimate_b,
        separation_px,
        separation_deg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fit_vanishing_line, Point2};

    fn seg(a: (f64, f64), b: (f64, f64)) -> LineSegment {
        LineSegment::new(Point2::new(a.0, a.1), Point2::new(b.0, b.1)).unwrap()
    }

    fn x_axis() -> VanishingLineEstimate {
        fit_vanishing_line(&[
            ProjectivePoint::finite(Point2::new(0.0, 0.0)),
            ProjectivePoint::finite(Point2::new(10.0, 0.0)),
        ])
        .unwrap()
    }

    #[test]
    fn point_on_line() {
        let v = check_point_on_line(
            &ProjectivePoint::finite(Point2::new(5.0, 0.5)),
            &x_axis(),
            3.0,
        );
        assert_eq!(v.verdict, Verdict::Consistent);
        assert_eq!(v.score, 0.5);

        let v = check_point_on_line(
            &ProjectivePoint::finite(Point2::new(5.0, 50.0)),
            &x_axis(),
            3.0,
        );
        assert_eq!(v.verdict, Verdict::Inconsistent);
        assert_eq!(v.score, 50.0);

        let inf = ProjectivePoint::at_infinity(1.0, 0.0).unwrap();
        let v = check_point_on_line(&inf, &x_axis(), 3.0);
        assert_eq!(v.verdict, Verdict::Consistent);
        assert_eq!(v.score, 0.0);

        let steep = ProjectivePoint::at_infinity(1.0, 0.1).unwrap();
        let v = check_point_on_line(&steep, &x_axis(), 3.0);
        assert_eq!(v.verdict, Verdict::Inconsistent);
        assert!(v.score.is_infinite());
        assert!((v.detail[0] - 0.1f64.atan().to_degrees()).abs() < 1e-9);
    }

    #[test]
    fn combine_rule() {
        use Verdict::*;
        assert_eq!(Verdict::combine([]), Indeterminate);
        assert_eq!(Verdict::combine([Consistent, Consistent]), Consistent);
        assert_eq!(Verdict::combine([Consistent, Indeterminate]), Indeterminate);
        assert_eq!(
            Verdict::combine([Indeterminate, Inconsistent]),
            Inconsistent
        );
    }

    #[test]
    fn shared_pencil_is_consistent() {
        let a = [seg((0.0, 0.0), (1.0, 1.0)), seg((0.0, 10.0), (1.0, 9.0))];
        let b = [seg((5.0, 0.0), (5.0, 1.0)), seg((0.0, 5.0), (1.0, 5.0))];
        let r = check_shared_vanishing_point(&a, &b, 3.0).unwrap();
        assert_eq!(r.verdict.verdict, Verdict::Consistent);
        assert!(r.verdict.score < 1e-12);
        assert!(r.separation_px.unwrap() < 1e-12);
    }

    #[test]
    fn disjoint_pencils_are_inconsistent() {
        let a = [
            seg((-10.0, 10.0), (-5.0, 5.0)),
            seg((10.0, 10.0), (5.0, 5.0)),
        ];
        let b = [
            seg((190.0, 10.0), (195.0, 5.0)),
            seg((210.0, 10.0), (205.0, 5.0)),
        ];
        let r = check_shared_vanishing_point(&a, &b, 3.0).unwrap();
        assert_eq!(r.verdict.verdict, Verdict::Inconsistent);
        assert!((r.separation_px.unwrap() - 200.0).abs() < 1e-9);
    }

    #[test]
    fn shared_check_needs_two_lines_per_group() {
        let a = [seg((0.0, 0.0), (1.0, 1.0))];
        let b = [seg((5.0, 0.0), (5.0, 1.0)), seg((0.0, 5.0), (1.0, 5.0))];
        assert!(matches!(
            check_shared_vanishing_point(&a, &b, 3.0),
            Err(GeometryError::InsufficientConstraints { need: 2, have: 1 })
        ));
    }
}
