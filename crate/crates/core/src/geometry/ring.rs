//! Implicit circle-inscribed polygons built from uniform angular runs.
//!
//! A [`RingPolygon`] is stored as a handful of runs `start + j·step` plus
//! closure angles; its vertex list is never materialized for chord queries.
//! The stored half covers an angular span shorter than π and the full boundary
//! is that half followed by its antipodal copy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Vertices on the unit circle at `start + j·step` for `0 ≤ j ≤ count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring<T> {
    pub start: T,
    pub step: T,
    pub count: u64,
}

impl<T: Scalar> Ring<T> {
    pub fn end(&self) -> T {
        self.start + self.step * T::from_u64(self.count).unwrap_or_else(T::infinity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Piece<T> {
    /// `count` vertices `start + j·step`, `j < count`; straight edges between them.
    Run {
        start: T,
        step: T,
        count: usize,
    },
    /// One vertex at `start`; the edge leaving it is a circular arc.
    Arc {
        start: T,
    },
    Vertex {
        angle: T,
    },
}

impl<T: Scalar> Piece<T> {
    fn len(&self) -> usize {
        match self {
            Piece::Run { count, .. } => *count,
            _ => 1,
        }
    }

    fn first(&self) -> T {
        match *self {
            Piece::Run { start, .. } => start,
            Piece::Arc { start } => start,
            Piece::Vertex { angle } => angle,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingPolygon<T> {
    rings: Vec<Ring<T>>,
    closures: Vec<T>,
    pieces: Vec<Piece<T>>,
    offsets: Vec<usize>,
    half_len: usize,
    collapsed: Vec<usize>,
}

impl<T: Scalar> RingPolygon<T> {
    /// Builds the implicit polygon. Rings whose step is below the dedup
    /// tolerance become circular arcs; vertices closer than the tolerance merge.
    pub fn new(rings: Vec<Ring<T>>, closures: Vec<T>) -> Result<Self> {
        if rings.is_empty() && closures.is_empty() {
            return Err(Error::InvalidDomain("ring polygon without vertices".into()));
        }
        let tol = T::dedup_tol();
        let mut raw: Vec<Piece<T>> = Vec::new();
        let mut collapsed = Vec::new();
        let mut prev_end: Option<T> = None;
        for (i, r) in rings.iter().enumerate() {
            if !(r.start.is_finite() && r.step >= T::zero() && r.start >= T::zero()) {
                return Err(Error::InvalidDomain(format!("ring {i} has invalid start/step")));
            }
            if let Some(pe) = prev_end {
                if r.start < pe - tol {
                    return Err(Error::InvalidDomain(format!("ring {i} overlaps its predecessor")));
                }
            }
            let end = r.end();
            if r.step < tol || !end.is_finite() {
                collapsed.push(i);
                let width = if end.is_finite() { end - r.start } else { T::zero() };
                if width >= tol {
                    raw.push(Piece::Arc { start: r.start });
                    raw.push(Piece::Vertex { angle: end });
                } else {
                    raw.push(Piece::Vertex { angle: r.start });
                }
                prev_end = Some(if end.is_finite() { end } else { r.start });
            } else {
                let count = usize::try_from(r.count).map_err(|_| Error::InvalidDomain(format!("ring {i} too large")))?;
                if count == 0 {
                    raw.push(Piece::Vertex { angle: r.start });
                } else {
                    raw.push(Piece::Run { start: r.start, step: r.step, count });
                    raw.push(Piece::Vertex { angle: end });
                }
                prev_end = Some(end);
            }
        }
        for &c in &closures {
            raw.push(Piece::Vertex { angle: c });
        }

        // merge near-duplicate vertices, keeping arcs/runs intact
        let mut pieces: Vec<Piece<T>> = Vec::new();
        let mut last: Option<T> = None;
        for p in raw {
            let first = p.first();
            if let Some(l) = last {
                if first < l - tol {
                    return Err(Error::InvalidDomain("angles are not increasing".into()));
                }
                if first - l < tol {
                    match p {
                        Piece::Vertex { .. } => continue,
                        Piece::Run { start, step, count } => {
                            if count == 1 {
                                continue;
                            }
                            // drop the duplicated first vertex
                            pieces.push(Piece::Run { start: start + step, step, count: count - 1 });
                            last = Some(start + step * T::from_usize(count - 1).unwrap());
                            continue;
                        }
                        Piece::Arc { start } => {
                            // the arc absorbs the previous vertex
                            if let Some(Piece::Vertex { .. }) = pieces.last() {
                                pieces.pop();
                            }
                            pieces.push(Piece::Arc { start });
                            last = Some(start);
                            continue;
                        }
                    }
                }
            }
            last = Some(match p {
                Piece::Run { start, step, count } => start + step * T::from_usize(count - 1).unwrap(),
                other => other.first(),
            });
            pieces.push(p);
        }
        // an arc leaving the last vertex of the half would wrap onto the antipodal copy
        if let Some(Piece::Arc { start }) = pieces.last().copied() {
            pieces.pop();
            pieces.push(Piece::Vertex { angle: start });
        }
        let first = pieces.first().map(|p| p.first()).unwrap();
        let lastv = last.unwrap();
        if first < T::zero() || lastv >= first + T::PI() - tol {
            return Err(Error::InvalidDomain("half boundary must span less than π so that the origin is interior".into()));
        }
        let mut offsets = Vec::with_capacity(pieces.len() + 1);
        let mut acc = 0usize;
        for p in &pieces {
            offsets.push(acc);
            acc += p.len();
        }
        offsets.push(acc);
        if acc < 2 {
            return Err(Error::InvalidDomain("need at least two vertices per half".into()));
        }
        Ok(Self { rings, closures, pieces, offsets, half_len: acc, collapsed })
    }

    pub fn rings(&self) -> &[Ring<T>] {
        &self.rings
    }

    pub fn closures(&self) -> &[T] {
        &self.closures
    }

    /// Indices of rings treated as circular arcs.
    pub fn collapsed_rings(&self) -> &[usize] {
        &self.collapsed
    }

    pub fn len(&self) -> usize {
        2 * self.half_len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn locate(&self, h: usize) -> (usize, usize) {
        let pi = match self.offsets.binary_search(&h) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        // offsets has a trailing sentinel; exact hits on it cannot occur for h < half_len
        let pi = pi.min(self.pieces.len() - 1);
        (pi, h - self.offsets[pi])
    }

    /// Polar angle of vertex `k` (global index, `0 ≤ k < len`).
    pub fn angle(&self, k: usize) -> T {
        let (h, shift) = if k < self.half_len { (k, T::zero()) } else { (k - self.half_len, T::PI()) };
        let (pi, j) = self.locate(h);
        let a = match self.pieces[pi] {
            Piece::Run { start, step, .. } => start + step * T::from_usize(j).unwrap(),
            Piece::Arc { start } => start,
            Piece::Vertex { angle } => angle,
        };
        a + shift
    }

    /// Whether the edge leaving vertex `k` is a circular arc.
    pub fn edge_is_arc(&self, k: usize) -> bool {
        let h = k % self.half_len;
        let (pi, _) = self.locate(h);
        matches!(self.pieces[pi], Piece::Arc { .. })
    }

    /// All vertex angles in order (arcs contribute their endpoints only).
    pub fn materialize_angles(&self) -> Vec<T> {
        (0..self.len()).map(|k| self.angle(k)).collect()
    }
}
