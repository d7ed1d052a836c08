use serde::{Deserialize, Serialize};

use super::{GeometryError, Point2, ProjectivePoint};

/// Minimum endpoint separation for a usable segment, in pixels.
pub const EPS_SEGMENT: f64 = 1e-6;

/// Two-line systems with `|sin θ|` between the segment directions at or below
/// this value are treated as parallel.
pub const EPS_DETERMINANT: f64 = 1e-10;

/// An annotated image segment given by two distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSegment {
    pub p: Point2,
    pub q: Point2,
}

impl LineSegment {
    /// Builds a segment, rejecting endpoints closer than [`EPS_SEGMENT`].
    pub fn new(p: Point2, q: Point2) -> Result<Self, GeometryError> {
        let seg = Self { p, q };
        seg.validate()?;
        Ok(seg)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.p.is_finite() && self.q.is_finite()) || self.length() <= EPS_SEGMENT {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.p.distance(&self.q)
    }

    pub fn midpoint(&self) -> Point2 {
        (self.p + self.q).scale(0.5)
    }

    /// Unit vector from `p` towards `q`.
    pub fn direction(&self) -> Option<Point2> {
        (self.q - self.p).normalized()
    }

    pub fn reversed(&self) -> LineSegment {
        LineSegment {
            p: self.q,
            q: self.p,
        }
    }

    pub fn translated(&self, by: Point2) -> LineSegment {
        LineSegment {
            p: self.p + by,
            q: self.q + by,
        }
    }
}

/// Line parameterized by a unit normal and an anchor point on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineNormalForm {
    pub normal: Point2,
    pub anchor: Point2,
}

impl LineNormalForm {
    /// Unit direction along the line; the normal rotated by −90°.
    pub fn direction(&self) -> Point2 {
        Point2::new(self.normal.y, -self.normal.x)
    }

    /// Signed distance `nᵀ(v − p)`.
    pub fn signed_distance(&self, v: Point2) -> f64 {
        self.normal.dot(&(v - self.anchor))
    }

    /// Homogeneous coefficients `(a, b, c)` with `a·x + b·y + c = 0`.
    pub fn coefficients(&self) -> [f64; 3] {
        [self.normal.x, self.normal.y, -self.normal.dot(&self.anchor)]
    }
}

/// Normal form of a segment: the direction `(q − p)/|q − p|` rotated by +90°,
/// anchored at `p`.
pub fn segment_to_normal_form(seg: &LineSegment) -> Result<LineNormalForm, GeometryError> {
    seg.validate()?;
    let d = seg.direction().ok_or(GeometryError::DegenerateSegment)?;
    Ok(LineNormalForm {
        normal: Point2::new(-d.y, d.x),
        anchor: seg.p,
    })
}

/// Perpendicular distance `|nᵀ(v − p)|` from a point to a line.
pub fn perpendicular_distance(v: Point2, line: &LineNormalForm) -> f64 {
    line.signed_distance(v).abs()
}

/// Intersects the infinite lines through two segments.
///
/// Each line is taken in parametric form `l(t) = (p − q)·t + q` and the 2×2
/// system `l1(t1) = l2(t2)` is solved for `t1`. When the segment directions
/// are parallel to within [`EPS_DETERMINANT`] the system is singular and the
/// shared direction is returned as a point at infinity.
pub fn intersect_two_lines(
    l1: &LineSegment,
    l2: &LineSegment,
) -> Result<ProjectivePoint, GeometryError> {
    l1.validate()?;
    l2.validate()?;
    let d1 = l1.p - l1.q;
    let d2 = l2.p - l2.q;
    // matrix [[d1x, -d2x], [d1y, -d2y]]
    let det = d2.x * d1.y - d1.x * d2.y;
    let scale = d1.norm() * d2.norm();
    if det.abs() <= EPS_DETERMINANT * scale {
        let u1 = d1.scale(1.0 / d1.norm());
        let mut u2 = d2.scale(1.0 / d2.norm());
        if u1.dot(&u2) < 0.0 {
            u2 = -u2;
        }
        let mean = u1 + u2;
        return ProjectivePoint::at_infinity(mean.x, mean.y)
            .ok_or(GeometryError::DegenerateConfiguration);
    }
    let rhs = l2.q - l1.q;
    let t1 = (-d2.y * rhs.x + d2.x * rhs.y) / det;
    Ok(ProjectivePoint::finite(l1.q + d1.scale(t1)))
}

/// How closely a set of lines agrees on a single common direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelBundle {
    /// Least-squares common direction (unit, canonical sign).
    pub direction: Point2,
    /// Largest angle between any line and `direction`, in degrees.
    pub max_deviation_deg: f64,
    /// Per-line deviation in pixels: how far each segment's endpoints move
    /// when it is rotated about its midpoint onto `direction`.
    pub residuals: Vec<f64>,
}

impl ParallelBundle {
    pub fn rms(&self) -> f64 {
        rms(&self.residuals)
    }
}

/// Fits a common direction to segments: the eigenvector of `Σ nᵢnᵢᵀ` with
/// the smallest eigenvalue.
pub fn parallel_bundle(segments: &[LineSegment]) -> Result<ParallelBundle, GeometryError> {
    let forms = segments
        .iter()
        .map(segment_to_normal_form)
        .collect::<Result<Vec<_>, _>>()?;
    if forms.is_empty() {
        return Err(GeometryError::InsufficientConstraints { need: 1, have: 0 });
    }
    let m = scatter(forms.iter().map(|f| f.normal));
    let direction = m.min_eigenvector();
    let direction = ProjectivePoint::at_infinity(direction.x, direction.y)
        .and_then(|p| p.direction())
        .ok_or(GeometryError::DegenerateConfiguration)?;
    let mut max_dev: f64 = 0.0;
    let residuals = segments
        .iter()
        .zip(&forms)
        .map(|(seg, form)| {
            let s = form.normal.dot(&direction).abs().min(1.0);
            max_dev = max_dev.max(s.asin().to_degrees());
            0.5 * seg.length() * s
        })
        .collect();
    Ok(ParallelBundle {
        direction,
        max_deviation_deg: max_dev,
        residuals,
    })
}

/// Symmetric 2×2 matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Sym2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sym2 {
    /// Eigenvalues, largest first.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.a + self.c);
        let r = (0.5 * (self.a - self.c)).hypot(self.b);
        (mean + r, mean - r)
    }

    pub fn condition_number(&self) -> f64 {
        let (hi, lo) = self.eigenvalues();
        if lo <= 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    fn eigenvector(&self, lambda: f64) -> Point2 {
        // two candidate forms; take the better-conditioned one
        let v1 = Point2::new(self.b, lambda - self.a);
        let v2 = Point2::new(lambda - self.c, self.b);
        let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
        match v.normalized() {
            Some(v) => v,
            // isotropic or diagonal: pick the axis matching lambda
            None if (self.a - lambda).abs() <= (self.c - lambda).abs() => Point2::new(1.0, 0.0),
            None => Point2::new(0.0, 1.0),
        }
    }

    pub fn min_eigenvector(&self) -> Point2 {
        self.eigenvector(self.eigenvalues().1)
    }
}

/// `Σ v vᵀ`, accumulated in sorted order so the sum does not depend on the
/// order of the input.
pub(crate) fn scatter(vectors: impl Iterator<Item = Point2>) -> Sym2 {
    let mut vectors: Vec<Point2> = vectors.collect();
    vectors.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    vectors.iter().fold(Sym2::default(), |acc, n| Sym2 {
        a: acc.a + n.x * n.x,
        b: acc.b + n.x * n.y,
        c: acc.c + n.y * n.y,
    })
}

/// Root mean square, summed in sorted order.
pub(crate) fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut squares: Vec<f64> = values.iter().map(|r| r * r).collect();
    squares.sort_by(f64::total_cmp);
    (squares.iter().sum::<f64>() / values.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> LineSegment {
        LineSegment::new(Point2::new(a.0, a.1), Point2::new(b.0, b.1)).unwrap()
    }

    #[test]
    fn normal_form_rotates_direction_by_plus_90() {
        let f = segment_to_normal_form(&seg((0.0, 0.0), (2.0, 0.0))).unwrap();
        assert_eq!(f.normal, Point2::new(0.0, 1.0));
        assert_eq!(f.anchor, Point2::new(0.0, 0.0));

        let f = segment_to_normal_form(&seg((0.0, 0.0), (0.0, 3.0))).unwrap();
        assert_eq!(f.normal, Point2::new(-1.0, 0.0));
        assert_eq!(f.anchor, Point2::new(0.0, 0.0));
    }

    #[test]
    fn zero_length_segment_is_degenerate() {
        let p = Point2::new(1.0, 1.0);
        assert_eq!(
            LineSegment::new(p, p),
            Err(GeometryError::DegenerateSegment)
        );
        let raw = LineSegment { p, q: p };
        assert_eq!(
            segment_to_normal_form(&raw),
            Err(GeometryError::DegenerateSegment)
        );
    }

    #[test]
    fn two_line_intersections() {
        let x = intersect_two_lines(&seg((0.0, 0.0), (1.0, 1.0)), &seg((0.0, 2.0), (2.0, 0.0)))
            .unwrap();
        assert!(x.approx_eq(&ProjectivePoint::finite(Point2::new(1.0, 1.0)), 1e-15));

        let x = intersect_two_lines(&seg((0.0, -5.0), (0.0, 5.0)), &seg((-5.0, 0.0), (5.0, 0.0)))
            .unwrap();
        assert_eq!(x.as_finite(), Some(Point2::new(0.0, 0.0)));

        let x = intersect_two_lines(&seg((0.0, 0.0), (1.0, 0.0)), &seg((0.0, 1.0), (1.0, 1.0)))
            .unwrap();
        assert_eq!(x.direction(), Some(Point2::new(1.0, 0.0)));
    }

    #[test]
    fn antiparallel_segments_share_direction() {
        let x = intersect_two_lines(&seg((0.0, 0.0), (3.0, 4.0)), &seg((13.0, 4.0), (10.0, 0.0)))
            .unwrap();
        let d = x.direction().unwrap();
        assert!(d.distance(&Point2::new(0.6, 0.8)) < 1e-15, "{d:?}");
    }

    #[test]
    fn distances() {
        let d = |v: (f64, f64), a, b| {
            perpendicular_distance(
                Point2::new(v.0, v.1),
                &segment_to_normal_form(&seg(a, b)).unwrap(),
            )
        };
        assert_eq!(d((3.0, 4.0), (0.0, 0.0), (1.0, 0.0)), 4.0);
        assert!(d((1.0, 1.0), (0.0, 0.0), (2.0, 2.0)).abs() < 1e-15);
        assert!((d((0.0, 2.0), (0.0, 0.0), (1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_eigen() {
        let m = Sym2 {
            a: 2.0,
            b: 1.0,
            c: 2.0,
        };
        let (hi, lo) = m.eigenvalues();
        assert!((hi - 3.0).abs() < 1e-15 && (lo - 1.0).abs() < 1e-15);
        let v = m.min_eigenvector();
        assert!((v.x + v.y).abs() < 1e-15);
        let diag = Sym2 {
            a: 1.0,
            b: 0.0,
            c: 4.0,
        };
        assert_eq!(diag.min_eigenvector().x.abs(), 1.0);
        assert_eq!(diag.eigenvector(diag.eigenvalues().0).y.abs(), 1.0);
    }

    #[test]
    fn bundle_of_parallel_lines() {
        let b =
            parallel_bundle(&[seg((0.0, 0.0), (0.0, 5.0)), seg((10.0, 0.0), (10.0, 5.0))]).unwrap();
        assert_eq!(b.direction, Point2::new(0.0, 1.0));
        assert_eq!(b.max_deviation_deg, 0.0);
        assert_eq!(b.rms(), 0.0);
    }
}
