//! Least-squares estimation of vanishing points and vanishing lines.
//!
//! A vanishing point from `m ≥ 3` segments is the point `v` minimizing the
//! summed squared perpendicular distances
//!
//! ```text
//! E(v) = Σ (nᵢᵀ (v − pᵢ))²
//! ```
//!
//! whose stationary point is `v = (Σ nᵢnᵢᵀ)⁻¹ Σ nᵢnᵢᵀ pᵢ`. The 2×2 matrix is
//! singular exactly when every line is parallel, in which case the estimate
//! is a point at infinity along the shared direction.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::line::{parallel_bundle, rms, scatter, Sym2};
use super::{
    intersect_two_lines, perpendicular_distance, segment_to_normal_form, GeometryError,
    LineNormalForm, LineSegment, Point2, ProjectivePoint, EPS_SEGMENT, THETA_TOL_DEG,
};

/// Condition number of `Σ nᵢnᵢᵀ` above which the lines are treated as
/// parallel.
pub const KAPPA_MAX: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VanishingPointClass {
    Finite,
    AtInfinity,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingPointEstimate {
    pub location: ProjectivePoint,
    pub rms_residual: f64,
    /// One entry per input segment, in input order. For a point at infinity
    /// this is the endpoint displacement needed to make the segment parallel
    /// to the estimated direction.
    pub per_line_residuals: Vec<f64>,
    #[serde(with = "crate::nonfinite")]
    pub condition_number: f64,
    pub classification: VanishingPointClass,
}

/// Estimates the point closest (in perpendicular distance) to all lines.
///
/// Two lines reduce to [`intersect_two_lines`] with zero residuals. Inputs
/// are accumulated in a canonical order so the result does not depend on the
/// order of `lines`.
pub fn estimate_vanishing_point(
    lines: &[LineSegment],
) -> Result<VanishingPointEstimate, GeometryError> {
    if lines.len() < 2 {
        return Err(GeometryError::InsufficientConstraints {
            need: 2,
            have: lines.len(),
        });
    }
    let forms = lines
        .iter()
        .map(segment_to_normal_form)
        .collect::<Result<Vec<_>, _>>()?;
    let order = canonical_order(&forms);
    let normal_matrix = scatter(order.iter().map(|&i| forms[i].normal));
    let condition_number = normal_matrix.condition_number();

    if lines.len() == 2 {
        let location = intersect_two_lines(&lines[0], &lines[1])?;
        let classification = if location.is_finite() {
            VanishingPointClass::Finite
        } else {
            VanishingPointClass::AtInfinity
        };
        return Ok(VanishingPointEstimate {
            location,
            rms_residual: 0.0,
            per_line_residuals: vec![0.0; 2],
            condition_number,
            classification,
        });
    }

    if condition_number > KAPPA_MAX {
        return at_infinity_estimate(lines, condition_number);
    }

    // Solve relative to the mean anchor for better conditioning.
    let n = forms.len() as f64;
    let centre = order
        .iter()
        .fold(Point2::default(), |acc, &i| acc + forms[i].anchor)
        .scale(1.0 / n);
    let rhs = order.iter().fold(Point2::default(), |acc, &i| {
        let f = &forms[i];
        acc + f.normal.scale(f.normal.dot(&(f.anchor - centre)))
    });
    let location = match solve_sym2(&normal_matrix, rhs) {
        Some(offset) => centre + offset,
        None => return at_infinity_estimate(lines, condition_number),
    };
    if !location.is_finite() {
        return Ok(degenerate(lines.len(), condition_number));
    }
    let per_line_residuals: Vec<f64> = forms
        .iter()
        .map(|f| perpendicular_distance(location, f))
        .collect();
    Ok(VanishingPointEstimate {
        location: ProjectivePoint::finite(location),
        rms_residual: rms(&per_line_residuals),
        per_line_residuals,
        condition_number,
        classification: VanishingPointClass::Finite,
    })
}

fn at_infinity_estimate(
    lines: &[LineSegment],
    condition_number: f64,
) -> Result<VanishingPointEstimate, GeometryError> {
    let bundle = parallel_bundle(lines)?;
    let Some(location) = ProjectivePoint::at_infinity(bundle.direction.x, bundle.direction.y)
    else {
        return Ok(degenerate(lines.len(), condition_number));
    };
    Ok(VanishingPointEstimate {
        location,
        rms_residual: bundle.rms(),
        per_line_residuals: bundle.residuals,
        condition_number,
        classification: VanishingPointClass::AtInfinity,
    })
}

fn degenerate(count: usize, condition_number: f64) -> VanishingPointEstimate {
    VanishingPointEstimate {
        // placeholder location; callers must check the classification
        location: ProjectivePoint::finite(Point2::default()),
        rms_residual: f64::INFINITY,
        per_line_residuals: vec![f64::INFINITY; count],
        condition_number,
        classification: VanishingPointClass::Degenerate,
    }
}

fn solve_sym2(m: &Sym2, rhs: Point2) -> Option<Point2> {
    let det = m.a * m.c - m.b * m.b;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some(Point2::new(
        (m.c * rhs.x - m.b * rhs.y) / det,
        (m.a * rhs.y - m.b * rhs.x) / det,
    ))
}

fn canonical_order(forms: &[LineNormalForm]) -> Vec<usize> {
    let key = |f: &LineNormalForm| [f.normal.x, f.normal.y, f.anchor.x, f.anchor.y];
    let mut idx: Vec<usize> = (0..forms.len()).collect();
    idx.sort_by(|&i, &j| {
        key(&forms[i])
            .iter()
            .zip(key(&forms[j]).iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    idx
}

/// A line `a·x + b·y + c = 0` with `(a, b)` of unit norm, fitted to
/// vanishing points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingLineEstimate {
    pub line: [f64; 3],
    pub per_point_residuals: Vec<f64>,
    pub rms_residual: f64,
}

impl VanishingLineEstimate {
    pub fn normal(&self) -> Point2 {
        Point2::new(self.line[0], self.line[1])
    }

    pub fn direction(&self) -> Point2 {
        Point2::new(-self.line[1], self.line[0])
    }

    pub fn distance(&self, p: Point2) -> f64 {
        (self.line[0] * p.x + self.line[1] * p.y + self.line[2]).abs()
    }
}

/// Fits a vanishing line through vanishing points.
///
/// Finite points are fitted by total least squares (centroid plus the
/// smallest-variance direction). A point at infinity fixes the line's
/// direction exactly; only its offset is then fitted to the finite points.
pub fn fit_vanishing_line(
    points: &[ProjectivePoint],
) -> Result<VanishingLineEstimate, GeometryError> {
    if points.len() < 2 {
        return Err(GeometryError::InsufficientConstraints {
            need: 2,
            have: points.len(),
        });
    }
    let mut finite: Vec<(usize, Point2)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.as_finite().map(|f| (i, f)))
        .collect();
    finite.sort_by(|a, b| a.1.x.total_cmp(&b.1.x).then(a.1.y.total_cmp(&b.1.y)));
    let mut directions: Vec<Point2> = points.iter().filter_map(|p| p.direction()).collect();
    directions.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));

    let normal = if let Some(first) = directions.first() {
        for d in &directions[1..] {
            let angle = first.cross(d).abs().min(1.0).asin().to_degrees();
            if angle > THETA_TOL_DEG {
                return Err(GeometryError::InconsistentDirections);
            }
        }
        if finite.is_empty() {
            return Err(GeometryError::DegenerateConfiguration);
        }
        let mean = directions.iter().fold(Point2::default(), |acc, d| {
            acc + if d.dot(first) < 0.0 { -*d } else { *d }
        });
        let d = mean
            .normalized()
            .ok_or(GeometryError::DegenerateConfiguration)?;
        Point2::new(-d.y, d.x)
    } else {
        let centroid = mean_point(finite.iter().map(|(_, p)| *p));
        let spread = finite
            .iter()
            .map(|(_, p)| p.distance(&centroid))
            .fold(0.0, f64::max);
        if spread <= EPS_SEGMENT {
            return Err(GeometryError::DegenerateConfiguration);
        }
        if finite.len() == 2 {
            let d = (finite[1].1 - finite[0].1)
                .normalized()
                .ok_or(GeometryError::DegenerateConfiguration)?;
            Point2::new(-d.y, d.x)
        } else {
            scatter(finite.iter().map(|(_, p)| *p - centroid)).min_eigenvector()
        }
    };

    let centroid = mean_point(finite.iter().map(|(_, p)| *p));
    let mut line = [normal.x, normal.y, -normal.dot(&centroid)];
    if line[0] < 0.0 || (line[0] == 0.0 && line[1] < 0.0) {
        line = [-line[0], -line[1], -line[2]];
    }
    let line = line.map(|v| v + 0.0);
    let estimate_line = VanishingLineEstimate {
        line,
        per_point_residuals: vec![],
        rms_residual: 0.0,
    };
    let per_point_residuals: Vec<f64> = points
        .iter()
        .map(|p| p.as_finite().map_or(0.0, |f| estimate_line.distance(f)))
        .collect();
    Ok(VanishingLineEstimate {
        line,
        rms_residual: rms(&per_point_residuals),
        per_point_residuals,
    })
}

fn mean_point(points: impl Iterator<Item = Point2>) -> Point2 {
    let (sum, n) = points.fold((Point2::default(), 0usize), |(s, n), p| (s + p, n + 1));
    if n == 0 {
        sum
    } else {
        sum.scale(1.0 / n as f64)
    }
}
