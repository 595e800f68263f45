use serde::Serialize;

use super::polygon::{circle_exit, contains_cyclic, exit_cyclic, Cyclic, Polygon};
use super::ring::{Ring, RingPolygon};
use super::vec2::{Mat2, Point2, Vec2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bounded open convex planar domain containing the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexDomain<T> {
    Polygon(Polygon<T>),
    Rings(RingPolygon<T>),
    UnitDisk,
}

/// Boundary hits of the line through `p` with direction `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chord<T> {
    pub t_minus: T,
    pub t_plus: T,
    pub p_minus: Point2<T>,
    pub p_plus: Point2<T>,
}

/// Where a ray leaves the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Exit<T> {
    pub t: T,
    /// Exit edge for polygonal domains.
    pub edge: Option<usize>,
}

impl<T: Scalar> ConvexDomain<T> {
    pub fn from_angles(angles: Vec<T>) -> Result<Self> {
        Polygon::from_angles(angles).map(Self::Polygon)
    }

    pub fn from_vertices(vertices: Vec<Point2<T>>) -> Result<Self> {
        Polygon::from_vertices(vertices).map(Self::Polygon)
    }

    pub fn from_rings(rings: Vec<Ring<T>>, closures: Vec<T>) -> Result<Self> {
        RingPolygon::new(rings, closures).map(Self::Rings)
    }

    pub fn is_polygonal(&self) -> bool {
        !matches!(self, Self::UnitDisk)
    }

    /// Number of boundary vertices (0 for the disk).
    pub fn vertex_count(&self) -> usize {
        match self {
            Self::Polygon(p) => p.len(),
            Self::Rings(r) => r.len(),
            Self::UnitDisk => 0,
        }
    }

    pub fn vertex(&self, k: usize) -> Point2<T> {
        match self {
            Self::Polygon(p) => p.vertex(k),
            Self::Rings(r) => Cyclic::vertex(r, k),
            Self::UnitDisk => panic!("the disk has no vertices"),
        }
    }

    /// Polar angle of vertex `k`, increasing with `k`.
    pub fn vertex_angle(&self, k: usize) -> T {
        match self {
            Self::Polygon(p) => p.polar(k),
            Self::Rings(r) => r.angle(k),
            Self::UnitDisk => panic!("the disk has no vertices"),
        }
    }

    /// Whether the edge leaving vertex `k` is a circular arc.
    pub fn edge_is_arc(&self, k: usize) -> bool {
        match self {
            Self::Rings(r) => r.edge_is_arc(k),
            _ => false,
        }
    }

    /// Vertices all lying on the unit circle, stored by angle.
    pub fn is_inscribed(&self) -> bool {
        match self {
            Self::Polygon(p) => p.is_inscribed(),
            Self::Rings(_) | Self::UnitDisk => true,
        }
    }

    /// `−x ∈ C` whenever `x ∈ C`.
    pub fn is_centrally_symmetric(&self) -> bool {
        match self {
            Self::UnitDisk | Self::Rings(_) => true,
            Self::Polygon(p) => {
                let n = p.len();
                if n % 2 == 1 {
                    return false;
                }
                let v = p.vertices();
                let tol = T::lit(1e3) * T::epsilon();
                (0..n / 2).all(|k| (v[k] + v[k + n / 2]).norm() <= tol * (T::one() + v[k].norm()))
            }
        }
    }

    /// True iff `p` is strictly interior.
    pub fn contains(&self, p: Point2<T>) -> bool {
        match self {
            Self::Polygon(poly) => contains_cyclic(poly, p),
            Self::Rings(r) => contains_cyclic(r, p),
            Self::UnitDisk => p.is_finite() && super::polygon::one_minus_norm_sq(p) > T::zero(),
        }
    }

    pub(crate) fn exit(&self, p: Point2<T>, v: Vec2<T>) -> Exit<T> {
        match self {
            Self::Polygon(poly) => {
                let (t, e) = exit_cyclic(poly, p, v);
                Exit { t, edge: Some(e) }
            }
            Self::Rings(r) => {
                let (t, e) = exit_cyclic(r, p, v);
                Exit { t, edge: Some(e) }
            }
            Self::UnitDisk => Exit { t: circle_exit(p, v), edge: None },
        }
    }

    fn check(&self, p: Point2<T>, v: Vec2<T>) -> Result<()> {
        if !self.contains(p) {
            return Err(outside(p));
        }
        if v.x == T::zero() && v.y == T::zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(())
    }

    /// Forward and backward boundary hits of the line `p + t·v`.
    pub fn chord(&self, p: Point2<T>, v: Vec2<T>) -> Result<Chord<T>> {
        self.check(p, v)?;
        let t_plus = self.exit(p, v).t;
        let t_minus = self.exit(p, -v).t;
        Ok(Chord { t_minus, t_plus, p_minus: p - v * t_minus, p_plus: p + v * t_plus })
    }

    /// Forward hit parameter only.
    pub fn t_plus(&self, p: Point2<T>, v: Vec2<T>) -> Result<T> {
        self.check(p, v)?;
        Ok(self.exit(p, v).t)
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point2<T>, Point2<T>) {
        match self {
            Self::Polygon(p) => {
                let mut lo = p.vertices()[0];
                let mut hi = lo;
                for v in p.vertices() {
                    lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                (lo, hi)
            }
            Self::Rings(_) | Self::UnitDisk => (Vec2::new(-T::one(), -T::one()), Vec2::new(T::one(), T::one())),
        }
    }

    /// Explicit polygon with the same vertices; arcs become straight edges.
    pub fn materialize(&self) -> Result<Polygon<T>> {
        match self {
            Self::Polygon(p) => Ok(p.clone()),
            Self::Rings(r) => Polygon::from_angles(r.materialize_angles()),
            Self::UnitDisk => Err(Error::NotPolygonal),
        }
    }

    /// Image under an invertible linear map.
    pub fn linear_image(&self, m: &Mat2<T>) -> Result<Self> {
        let det = m.det();
        if det == T::zero() || !det.is_finite() {
            return Err(Error::SingularMatrix(det.to_f64().unwrap_or(f64::NAN)));
        }
        let poly = self.materialize()?;
        let verts = poly.vertices().iter().map(|&v| m.apply(v)).collect();
        Self::from_vertices(verts)
    }
}

pub(crate) fn outside<T: Scalar>(p: Point2<T>) -> Error {
    Error::PointOutsideDomain(p.x.to_f64().unwrap_or(f64::NAN), p.y.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> ConvexDomain<f64> {
        let v = |x, y| Vec2::new(x, y);
        ConvexDomain::from_vertices(vec![v(-1.0, -1.0), v(1.0, -1.0), v(1.0, 1.0), v(-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn contains_examples() {
        let d = ConvexDomain::<f64>::UnitDisk;
        assert!(d.contains(Vec2::zero()));
        assert!(!d.contains(Vec2::new(1.0, 0.0)));
        let s = square();
        assert!(s.contains(Vec2::new(0.5, 0.99)));
        assert!(!s.contains(Vec2::new(1.0, 0.5)));
        assert!(!s.contains(Vec2::new(-1.0, -1.0)));
    }

    #[test]
    fn chord_examples() {
        let d = ConvexDomain::<f64>::UnitDisk;
        let c = d.chord(Vec2::new(0.5, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!((c.t_plus - 0.5).abs() < 1e-15 && (c.t_minus - 1.5).abs() < 1e-15);
        let c = square().chord(Vec2::zero(), Vec2::new(1.0, 0.0)).unwrap();
        assert_eq!((c.t_minus, c.t_plus), (1.0, 1.0));
        let u = Vec2::new(1.0, 1.0) / 2f64.sqrt();
        let c = square().chord(Vec2::zero(), u).unwrap();
        assert!((c.t_plus - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chord_errors() {
        let s = square();
        assert_eq!(s.chord(Vec2::zero(), Vec2::zero()), Err(Error::ZeroDirection));
        assert!(matches!(s.chord(Vec2::new(2.0, 0.0), Vec2::new(1.0, 0.0)), Err(Error::PointOutsideDomain(..))));
    }

    #[test]
    fn binary_search_matches_edge_scan() {
        let angles: Vec<f64> = (0..101).map(|j| std::f64::consts::TAU * j as f64 / 101.0 + 0.01).collect();
        let d = ConvexDomain::from_angles(angles).unwrap();
        let poly = d.materialize().unwrap();
        let n = poly.len();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let p = Vec2::polar(rng.gen_range(0.0..6.3)) * rng.gen_range(0.0..0.99);
            let v = Vec2::polar(rng.gen_range(0.0..6.3));
            let t = d.t_plus(p, v).unwrap();
            let scan = (0..n)
                .filter_map(|k| {
                    let a = poly.vertices()[k];
                    let e = poly.vertices()[(k + 1) % n] - a;
                    let den = v.cross(e);
                    (den > 0.0).then(|| (a - p).cross(e) / den)
                })
                .fold(f64::INFINITY, f64::min);
            assert!((t - scan).abs() < 1e-12, "{t} vs {scan}");
        }
    }

    #[test]
    fn linear_image_of_square() {
        let r = Mat2::rotation(std::f64::consts::FRAC_PI_2);
        let img = square().linear_image(&r).unwrap();
        for v in img.materialize().unwrap().vertices() {
            assert!((v.x.abs() - 1.0).abs() < 1e-15 && (v.y.abs() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(square().linear_image(&Mat2::new(1.0, 2.0, 2.0, 4.0)), Err(Error::SingularMatrix(_))));
        assert_eq!(square().linear_image(&Mat2::identity()).unwrap(), square());
    }

    #[test]
    fn square_is_symmetric() {
        assert!(square().is_centrally_symmetric());
        let tri = ConvexDomain::from_angles(vec![0.0, 2.0, 4.0]).unwrap();
        assert!(!tri.is_centrally_symmetric());
    }
}
