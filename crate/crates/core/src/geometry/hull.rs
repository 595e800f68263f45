use super::domain::ConvexDomain;
use super::polygon::orient;
use super::vec2::Point2;
use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Scalar};

/// Counterclockwise convex hull (Andrew's monotone chain with exact
/// orientation tests). Points within the dedup tolerance of each other merge
/// and collinear boundary points are dropped.
pub fn convex_hull<T: Scalar>(points: &[Point2<T>]) -> Result<ConvexDomain<T>> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("non-finite point".into()));
    }
    let mut pts: Vec<Point2<T>> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    let tol = T::dedup_tol();
    pts.dedup_by(|b, a| (*b - *a).norm() < tol);
    if pts.len() < 3 {
        return Err(Error::DegenerateInput(format!("{} distinct points", pts.len())));
    }
    let mut hull: Vec<Point2<T>> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2<T>>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::DegenerateInput("points are collinear".into()));
    }
    ConvexDomain::from_vertices(hull)
}

/// Hull of unit-circle points given by polar angle. Every such point is
/// extreme, so the hull is the sorted angle list with near-duplicates merged.
pub fn inscribed_hull<T: Scalar>(angles: &[T]) -> Result<ConvexDomain<T>> {
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(Error::DegenerateInput("non-finite angle".into()));
    }
    let mut a: Vec<T> = angles.iter().map(|&x| wrap_angle(x)).collect();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let tol = T::dedup_tol();
    a.dedup_by(|b, a| *b - *a < tol);
    while a.len() > 1 && a[0] + T::TAU() - a[a.len() - 1] < tol {
        a.pop();
    }
    if a.len() < 3 {
        return Err(Error::DegenerateInput(format!("{} distinct points", a.len())));
    }
    ConvexDomain::from_angles(a)
}
