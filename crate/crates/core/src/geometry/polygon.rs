use super::vec2::{Point2, Vec2};
use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Scalar};

/// Exact orientation of `c` relative to the directed line `a → b`.
pub(crate) fn orient<T: Scalar>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> f64 {
    let f = |p: Point2<T>| robust::Coord { x: p.x.to_f64().unwrap(), y: p.y.to_f64().unwrap() };
    robust::orient2d(f(a), f(b), f(c))
}

/// Strictly convex counterclockwise polygon with the origin in its interior.
///
/// Vertex 0 is the vertex of smallest polar angle in `[0, 2π)`, so polar angles
/// increase with the index. Polygons built from angles are inscribed in the
/// unit circle and keep the angles as their exact representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<T> {
    vertices: Vec<Point2<T>>,
    polar: Vec<T>,
    inscribed: bool,
}

impl<T: Scalar> Polygon<T> {
    /// Polygon inscribed in the unit circle at the given polar angles
    /// (strictly increasing, inside `[0, 2π)`).
    pub fn from_angles(angles: Vec<T>) -> Result<Self> {
        let n = angles.len();
        if n < 3 {
            return Err(Error::InvalidDomain(format!("need at least 3 vertices, got {n}")));
        }
        for (i, a) in angles.iter().enumerate() {
            if !a.is_finite() || *a < T::zero() || *a >= T::TAU() {
                return Err(Error::InvalidDomain(format!("angle {i} outside [0, 2π)")));
            }
        }
        for k in 0..n {
            let gap = if k + 1 < n { angles[k + 1] - angles[k] } else { angles[0] + T::TAU() - angles[k] };
            if gap <= T::zero() {
                return Err(Error::InvalidDomain("angles must be strictly increasing".into()));
            }
            if gap >= T::PI() {
                return Err(Error::InvalidDomain("angular gap of π or more: origin not interior".into()));
            }
        }
        let vertices = angles.iter().map(|&a| Vec2::polar(a)).collect();
        Ok(Self { vertices, polar: angles, inscribed: true })
    }

    /// General polygon. Clockwise input is reversed; the list is rotated so that
    /// polar angles increase from vertex 0.
    pub fn from_vertices(mut vertices: Vec<Point2<T>>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidDomain(format!("need at least 3 vertices, got {n}")));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain("non-finite vertex".into()));
        }
        let twice_area: T = (0..n).map(|k| vertices[k].cross(vertices[(k + 1) % n])).fold(T::zero(), |a, b| a + b);
        if twice_area < T::zero() {
            vertices.reverse();
        }
        let origin = Vec2::zero();
        for k in 0..n {
            let (a, b, c) = (vertices[k], vertices[(k + 1) % n], vertices[(k + 2) % n]);
            if orient(a, b, c) <= 0.0 {
                return Err(Error::InvalidDomain(format!("vertex {} is not strictly convex", (k + 1) % n)));
            }
            if orient(a, b, origin) <= 0.0 {
                return Err(Error::InvalidDomain("origin is not strictly interior".into()));
            }
        }
        let polar: Vec<T> = vertices.iter().map(|v| wrap_angle(v.angle())).collect();
        let start = (0..n).min_by(|&i, &j| polar[i].partial_cmp(&polar[j]).unwrap()).unwrap();
        vertices.rotate_left(start);
        let mut polar = polar;
        polar.rotate_left(start);
        // winding once around the origin with ccw convex edges makes polar angles increasing
        if polar.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidDomain("vertices do not wind once around the origin".into()));
        }
        Ok(Self { vertices, polar, inscribed: false })
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn polar_angles(&self) -> &[T] {
        &self.polar
    }

    /// Whether the vertices are stored as exact angles on the unit circle.
    pub fn is_inscribed(&self) -> bool {
        self.inscribed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Cyclic vertex access shared by explicit and implicit polygons.
pub(crate) trait Cyclic<T: Scalar> {
    fn n(&self) -> usize;
    fn vertex(&self, k: usize) -> Point2<T>;
    /// Polar angle of vertex `k`, increasing in `k` within `[0, 2π)`.
    fn polar(&self, k: usize) -> T;
    fn arc(&self, _k: usize) -> bool {
        false
    }
}

impl<T: Scalar> Cyclic<T> for Polygon<T> {
    fn n(&self) -> usize {
        self.vertices.len()
    }
    fn vertex(&self, k: usize) -> Point2<T> {
        self.vertices[k]
    }
    fn polar(&self, k: usize) -> T {
        self.polar[k]
    }
}

impl<T: Scalar> Cyclic<T> for super::ring::RingPolygon<T> {
    fn n(&self) -> usize {
        self.len()
    }
    fn vertex(&self, k: usize) -> Point2<T> {
        Vec2::polar(self.angle(k))
    }
    fn polar(&self, k: usize) -> T {
        self.angle(k)
    }
    fn arc(&self, k: usize) -> bool {
        self.edge_is_arc(k)
    }
}

/// Index `k` of the sector `[polar(k), polar(k+1))` containing angle `phi`.
pub(crate) fn sector<T: Scalar, B: Cyclic<T>>(b: &B, phi: T) -> usize {
    let n = b.n();
    let phi = wrap_angle(phi);
    if phi < b.polar(0) || phi >= b.polar(n - 1) {
        return n - 1;
    }
    let (mut lo, mut hi) = (0, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if b.polar(mid) <= phi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub(crate) fn contains_cyclic<T: Scalar, B: Cyclic<T>>(b: &B, p: Point2<T>) -> bool {
    if !p.is_finite() {
        return false;
    }
    if p.x == T::zero() && p.y == T::zero() {
        return true;
    }
    let n = b.n();
    let k = sector(b, p.angle());
    if b.arc(k) {
        return one_minus_norm_sq(p) > T::zero();
    }
    orient(b.vertex(k), b.vertex((k + 1) % n), p) > 0.0
}

/// Forward parameter where `p + t·v` meets the unit circle, `|p| < 1`.
/// `1 − |p|²` with the rounding of the squares and their sum compensated, so
/// it keeps full relative precision near the unit circle.
pub(crate) fn one_minus_norm_sq<T: Scalar>(p: Point2<T>) -> T {
    let (x2, y2) = (p.x * p.x, p.y * p.y);
    let (ex, ey) = (p.x.mul_add(p.x, -x2), p.y.mul_add(p.y, -y2));
    let s = x2 + y2;
    let bv = s - x2;
    let es = (x2 - (s - bv)) + (y2 - bv);
    (T::one() - s) - (es + ex + ey)
}

pub(crate) fn circle_exit<T: Scalar>(p: Point2<T>, v: Vec2<T>) -> T {
    let a = v.norm_sq();
    let b = p.dot(v);
    let c = one_minus_norm_sq(p);
    let disc = (b * b + a * c).sqrt();
    if b >= T::zero() {
        c / (b + disc)
    } else {
        (disc - b) / a
    }
}

/// Forward boundary hit of the ray `p + t·v`: parameter and exit edge.
///
/// The exit edge is found by bisection on the angle of `V_k − p` measured from
/// `V_0 − p`, which increases monotonically with `k` for interior `p`, then
/// confirmed with orientation signs. A ray through a vertex reports the edge
/// leaving that vertex counterclockwise.
pub(crate) fn exit_cyclic<T: Scalar, B: Cyclic<T>>(b: &B, p: Point2<T>, v: Vec2<T>) -> (T, usize) {
    let n = b.n();
    let rel = |k: usize| (b.vertex(k) - p).angle();
    let a0 = rel(0);
    let target = wrap_angle(v.angle() - a0);
    let (mut lo, mut hi) = (0usize, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if wrap_angle(rel(mid) - a0) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let o = |k: usize| v.cross(b.vertex(k % n) - p);
    let ok = |k: usize| o(k) <= T::zero() && o(k + 1) > T::zero();
    let mut k = lo;
    if !ok(k) {
        let found = (1..=8).flat_map(|d| [(k + d) % n, (k + n - d % n) % n]).find(|&j| ok(j)).or_else(|| (0..n).find(|&j| ok(j)));
        if let Some(j) = found {
            k = j;
        }
    }
    (edge_hit(b, p, v, k), k)
}

pub(crate) fn edge_hit<T: Scalar, B: Cyclic<T>>(b: &B, p: Point2<T>, v: Vec2<T>, k: usize) -> T {
    if b.arc(k) {
        return circle_exit(p, v);
    }
    let n = b.n();
    let a = b.vertex(k);
    let e = b.vertex((k + 1) % n) - a;
    (a - p).cross(e) / v.cross(e)
}
