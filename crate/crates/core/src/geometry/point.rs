use std::fmt;

use serde::{Deserialize, Serialize};

/// Relative magnitude of `hw` below which a homogeneous point is treated as
/// lying at infinity.
pub const EPS_HOMOGENEOUS: f64 = 1e-12;

/// A point in the image plane, in pixels.
///
/// Serialized as a two-element array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dot(&self, other: &Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2-D cross product.
    pub fn cross(&self, other: &Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn scale(&self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }

    /// Rotation by `angle` radians about the origin.
    pub fn rotate(&self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn normalized(&self) -> Option<Point2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2::new(v[0], v[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Homogeneous 2-D point. Finite intersections and points at infinity (the
/// common direction of parallel image lines) share one representation.
///
/// Values are always stored in canonical form: `(x, y, 1)` for finite
/// points, or a unit direction `(dx, dy, 0)` whose first nonzero component is
/// positive. Scaling the three input components by any nonzero factor yields
/// the same canonical value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "PointRepr", try_from = "PointRepr")]
pub struct ProjectivePoint {
    hx: f64,
    hy: f64,
    hw: f64,
}

impl ProjectivePoint {
    /// Builds a point from homogeneous components. Returns `None` when all
    /// three are zero or any is non-finite.
    pub fn new(hx: f64, hy: f64, hw: f64) -> Option<Self> {
        if !(hx.is_finite() && hy.is_finite() && hw.is_finite()) {
            return None;
        }
        let norm = (hx * hx + hy * hy + hw * hw).sqrt();
        if norm == 0.0 {
            return None;
        }
        if hw.abs() > EPS_HOMOGENEOUS * norm {
            let (x, y) = (hx / hw, hy / hw);
            if x.is_finite() && y.is_finite() {
                return Some(Self {
                    hx: x,
                    hy: y,
                    hw: 1.0,
                });
            }
        }
        Self::direction_from(hx, hy)
    }

    pub fn finite(p: Point2) -> Self {
        Self {
            hx: p.x,
            hy: p.y,
            hw: 1.0,
        }
    }

    /// Point at infinity in image direction `(dx, dy)`. Returns `None` for
    /// the zero direction.
    pub fn at_infinity(dx: f64, dy: f64) -> Option<Self> {
        if !(dx.is_finite() && dy.is_finite()) {
            return None;
        }
        Self::direction_from(dx, dy)
    }

    fn direction_from(dx: f64, dy: f64) -> Option<Self> {
        let n = dx.hypot(dy);
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        let (mut x, mut y) = (dx / n, dy / n);
        if x < 0.0 || (x == 0.0 && y < 0.0) {
            x = -x;
            y = -y;
        }
        // avoid a signed zero leaking into serialized output
        Some(Self {
            hx: x + 0.0,
            hy: y + 0.0,
            hw: 0.0,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.hx, self.hy, self.hw]
    }

    pub fn is_finite(&self) -> bool {
        self.hw != 0.0
    }

    pub fn is_at_infinity(&self) -> bool {
        self.hw == 0.0
    }

    pub fn as_finite(&self) -> Option<Point2> {
        self.is_finite().then(|| Point2::new(self.hx, self.hy))
    }

    /// Unit direction of a point at infinity.
    pub fn direction(&self) -> Option<Point2> {
        self.is_at_infinity().then(|| Point2::new(self.hx, self.hy))
    }

    /// Equality of canonical forms. Finite points compare with tolerance
    /// `rel_tol · max(1, |a|)`; directions compare component-wise.
    pub fn approx_eq(&self, other: &ProjectivePoint, rel_tol: f64) -> bool {
        match (self.as_finite(), other.as_finite()) {
            (Some(a), Some(b)) => a.distance(&b) <= rel_tol * a.norm().max(1.0),
            (None, None) => {
                (self.hx - other.hx).abs() <= rel_tol && (self.hy - other.hy).abs() <= rel_tol
            }
            _ => false,
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "({}, {})", self.hx, self.hy)
        } else {
            write!(f, "inf({}, {})", self.hx, self.hy)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum PointRepr {
    Finite { x: f64, y: f64 },
    AtInfinity { dx: f64, dy: f64 },
}

impl From<ProjectivePoint> for PointRepr {
    fn from(p: ProjectivePoint) -> Self {
        if p.is_finite() {
            PointRepr::Finite { x: p.hx, y: p.hy }
        } else {
            PointRepr::AtInfinity { dx: p.hx, dy: p.hy }
        }
    }
}

impl TryFrom<PointRepr> for ProjectivePoint {
    type Error = String;
    fn try_from(r: PointRepr) -> Result<Self, String> {
        match r {
            PointRepr::Finite { x, y } => Ok(ProjectivePoint::finite(Point2::new(x, y))),
            PointRepr::AtInfinity { dx, dy } => ProjectivePoint::at_infinity(dx, dy)
                .ok_or_else(|| "point at infinity needs a nonzero direction".to_string()),
        }
    }
}
