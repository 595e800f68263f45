//! Hilbert distance, Finsler norm and the radial solve for metric spheres.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{outside, ConvexDomain, Point2, Vec2};
use crate::scalar::Scalar;

/// Point at Hilbert distance `R` from a center along a ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialSolve<T> {
    /// Euclidean parameter along the ray.
    pub s: T,
    /// `ds/dρ` at `ρ = R`.
    pub ds_drho: T,
    /// `t⁺ − s`, kept separately because it underflows `s`'s precision.
    pub gap: T,
}

/// Hilbert distance between interior points.
pub fn hilbert_distance<T: Scalar>(domain: &ConvexDomain<T>, p: Point2<T>, q: Point2<T>) -> Result<T> {
    if !domain.contains(p) {
        return Err(outside(p));
    }
    if !domain.contains(q) {
        return Err(outside(q));
    }
    let w = q - p;
    let len = w.norm();
    if len == T::zero() {
        return Ok(T::zero());
    }
    if len < T::lit(1e-15) {
        // first-order value; the cross ratio is 0/0 here
        return finsler_norm(domain, p, w);
    }
    let u = w / len;
    let t_plus = domain.exit(p, u).t;
    let t_minus = domain.exit(p, -u).t;
    let back = (len / t_minus).ln_1p();
    let fwd = if len < T::half() * t_plus {
        -(-len / t_plus).ln_1p()
    } else {
        // t⁺ − ℓ from q itself avoids the cancellation near the boundary
        (t_plus / domain.exit(q, u).t).ln()
    };
    Ok(T::half() * (back + fwd))
}

/// `F(p, v) = ½(1/t⁻ + 1/t⁺)`; zero for `v = 0`.
pub fn finsler_norm<T: Scalar>(domain: &ConvexDomain<T>, p: Point2<T>, v: Vec2<T>) -> Result<T> {
    if !domain.contains(p) {
        return Err(outside(p));
    }
    if v.x == T::zero() && v.y == T::zero() {
        return Ok(T::zero());
    }
    let t_plus = domain.exit(p, v).t;
    let t_minus = domain.exit(p, -v).t;
    Ok(T::half() * (t_minus.recip() + t_plus.recip()))
}

/// Radial solve from chord parameters, written with `e^{−2R}` only so that
/// large radii neither overflow nor lose the gap `t⁺ − s`.
pub fn radial_from_chord<T: Scalar>(t_minus: T, t_plus: T, r: T) -> RadialSolve<T> {
    let e = (-T::two() * r).exp();
    let den = t_plus * e + t_minus;
    let gap = t_plus * (t_plus + t_minus) * e / den;
    let s = -t_minus * t_plus * (-T::two() * r).exp_m1() / den;
    let ds_drho = T::two() * gap * t_minus / den;
    RadialSolve { s, ds_drho, gap }
}

/// Distance from the chord origin to the point at parameter `s` with
/// `gap = t⁺ − s` supplied separately (exact inverse of [`radial_from_chord`]).
pub fn distance_along_chord<T: Scalar>(t_minus: T, t_plus: T, s: T, gap: T) -> T {
    T::half() * ((s / t_minus).ln_1p() + (t_plus / gap).ln())
}

/// Point on the metric sphere of radius `r` about `center` in direction `u`.
pub fn ball_radial_point<T: Scalar>(domain: &ConvexDomain<T>, center: Point2<T>, u: Vec2<T>, r: T) -> Result<RadialSolve<T>> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be finite and ≥ 0, got {r}")));
    }
    let c = domain.chord(center, u)?;
    Ok(radial_from_chord(c.t_minus, c.t_plus, r))
}

/// Samples of the metric sphere `S(center, r)` at the given polar angles.
pub fn metric_sphere_polyline<T: Scalar>(domain: &ConvexDomain<T>, center: Point2<T>, r: T, angles: &[T]) -> Result<Vec<Point2<T>>> {
    angles
        .iter()
        .map(|&a| {
            let u = Vec2::polar(a);
            ball_radial_point(domain, center, u, r).map(|rs| center + u * rs.s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexDomain<f64> {
        let v = |x, y| Vec2::new(x, y);
        ConvexDomain::from_vertices(vec![v(-1.0, -1.0), v(1.0, -1.0), v(1.0, 1.0), v(-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn distance_examples() {
        let d = ConvexDomain::<f64>::UnitDisk;
        let h = hilbert_distance(&d, Vec2::zero(), Vec2::new(0.5, 0.0)).unwrap();
        assert!((h - 0.5f64.atanh()).abs() < 1e-15);
        let h = hilbert_distance(&square(), Vec2::zero(), Vec2::new(0.5, 0.0)).unwrap();
        assert!((h - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(hilbert_distance(&square(), Vec2::new(0.1, 0.2), Vec2::new(0.1, 0.2)).unwrap(), 0.0);
    }

    #[test]
    fn distance_near_boundary_keeps_digits() {
        let d = ConvexDomain::<f64>::UnitDisk;
        let r = 1.0 - 1e-12;
        let h = hilbert_distance(&d, Vec2::zero(), Vec2::new(r, 0.0)).unwrap();
        assert!((h - r.atanh()).abs() < 1e-12 * h);
    }

    #[test]
    fn finsler_examples() {
        assert_eq!(finsler_norm(&square(), Vec2::zero(), Vec2::new(1.0, 0.0)).unwrap(), 1.0);
        let f: f64 = finsler_norm(&ConvexDomain::UnitDisk, Vec2::new(0.5, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!((f - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(finsler_norm(&square(), Vec2::new(0.3, 0.0), Vec2::zero()).unwrap(), 0.0);
    }

    #[test]
    fn radial_examples() {
        let u = Vec2::new(1.0, 0.0);
        for d in [ConvexDomain::UnitDisk, square()] {
            assert_eq!(ball_radial_point(&d, Vec2::zero(), u, 0.0).unwrap().s, 0.0);
            for r in [0.1f64, 1.0, 5.0] {
                let rs = ball_radial_point(&d, Vec2::zero(), u, r).unwrap();
                assert!((rs.s - r.tanh()).abs() < 1e-15);
                let sech = 1.0 / r.cosh();
                assert!((rs.ds_drho - sech * sech).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn radial_inverts_distance() {
        let d = square();
        let c = Vec2::new(0.3, -0.2);
        for k in 0..16 {
            let u = Vec2::polar(k as f64 * 0.39);
            for r in [0.5, 3.0, 5.0] {
                let rs = ball_radial_point(&d, c, u, r).unwrap();
                let h = hilbert_distance(&d, c, c + u * rs.s).unwrap();
                assert!((h - r).abs() < 1e-9, "{h} vs {r}");
            }
            // past R ≈ 8 the Cartesian point cannot hold the gap; check the gap form
            let ch = d.chord(c, u).unwrap();
            for r in [12.0, 30.0, 300.0] {
                let rs = radial_from_chord(ch.t_minus, ch.t_plus, r);
                let h = distance_along_chord(ch.t_minus, ch.t_plus, rs.s, rs.gap);
                assert!((h - r).abs() < 1e-9 * r, "{h} vs {r}");
            }
        }
    }

    #[test]
    fn huge_radius_saturates() {
        let rs = ball_radial_point(&ConvexDomain::<f64>::UnitDisk, Vec2::zero(), Vec2::new(0.0, 1.0), 1e5).unwrap();
        assert_eq!(rs.s, 1.0);
        assert!(rs.gap >= 0.0 && rs.ds_drho >= 0.0);
        let rs = radial_from_chord(1.0, 1.0, 30.0);
        assert!((rs.gap / (2.0 * (-60f64).exp()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_polyline_axes() {
        let pts = metric_sphere_polyline(&ConvexDomain::UnitDisk, Vec2::zero(), 1.0, &[0.0, std::f64::consts::FRAC_PI_2]).unwrap();
        assert!((pts[0].x - 1f64.tanh()).abs() < 1e-15 && (pts[1].y - 1f64.tanh()).abs() < 1e-15);
        let pts = metric_sphere_polyline(&square(), Vec2::zero(), 0.0, &[0.0, 1.0]).unwrap();
        assert!(pts.iter().all(|p| p.norm() == 0.0));
    }

    #[test]
    fn f32_works() {
        let d = ConvexDomain::<f32>::UnitDisk;
        let h = hilbert_distance(&d, Vec2::zero(), Vec2::new(0.5f32, 0.0)).unwrap();
        assert!((h - 0.5f32.atanh()).abs() < 1e-6);
    }
}
