//! Globally adaptive tensor Gauss–Legendre quadrature in one and two dimensions.
//!
//! Every cell carries the fine estimate (sum over its halves or quarters) and
//! the difference to its own coarse estimate as error. The cell with the
//! largest error is split until the total error meets the tolerance. Cells are
//! summed in creation order, so results do not depend on heap tie-breaking.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    pub fn new(order: usize) -> Self {
        let gl = GaussLegendre::new(order.max(2)).expect("valid Gauss–Legendre order");
        let (x, w) = gl.as_node_weight_pairs().iter().copied().unzip();
        Self { x, w }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    fn q1(&self, f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        h * self.x.iter().zip(&self.w).map(|(&x, &w)| w * f(c + h * x)).sum::<f64>()
    }

    fn q2(&self, f: &mut impl FnMut(f64, f64) -> f64, r: &Rect) -> f64 {
        let (cx, hx) = (0.5 * (r.x0 + r.x1), 0.5 * (r.x1 - r.x0));
        let (cy, hy) = (0.5 * (r.y0 + r.y1), 0.5 * (r.y1 - r.y0));
        let mut s = 0.0;
        for (&xi, &wi) in self.x.iter().zip(&self.w) {
            let mut row = 0.0;
            for (&yj, &wj) in self.x.iter().zip(&self.w) {
                row += wj * f(cx + hx * xi, cy + hy * yj);
            }
            s += wi * row;
        }
        hx * hy * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn quarters(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }

    fn tiny(&self) -> bool {
        let small = |a: f64, b: f64| (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs()));
        small(self.x0, self.x1) || small(self.y0, self.y1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Outcome {
    pub value: f64,
    pub error: f64,
    pub evals: u64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_evals: u64,
}

struct Cell<G, const K: usize> {
    id: usize,
    geom: G,
    value: f64,
    err: f64,
    parts: [f64; K],
}

impl<G, const K: usize> PartialEq for Cell<G, K> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<G, const K: usize> Eq for Cell<G, K> {}
impl<G, const K: usize> PartialOrd for Cell<G, K> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<G, const K: usize> Ord for Cell<G, K> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then(o.id.cmp(&self.id))
    }
}

/// Shared refinement loop; `split` returns child geometries, `quad` one estimate.
fn refine<G: Copy, const K: usize>(
    init: &[G],
    tol: Tolerance,
    per_cell: u64,
    split: impl Fn(&G) -> [G; K],
    tiny: impl Fn(&G) -> bool,
    mut quad: impl FnMut(&G) -> f64,
) -> Result<Outcome> {
    let mut evals = 0u64;
    let mut next_id = 0usize;
    let mut heap: BinaryHeap<Cell<G, K>> = BinaryHeap::new();
    let mut done: Vec<Cell<G, K>> = Vec::new();
    let mut make = |geom: G, coarse: f64, evals: &mut u64, quad: &mut dyn FnMut(&G) -> f64| -> Cell<G, K> {
        let kids = split(&geom);
        let mut parts = [0.0; K];
        for (p, k) in parts.iter_mut().zip(kids.iter()) {
            *p = quad(k);
        }
        *evals += per_cell * K as u64;
        let value: f64 = parts.iter().sum();
        let id = next_id;
        next_id += 1;
        Cell { id, geom, value, err: (value - coarse).abs(), parts }
    };
    for g in init {
        let coarse = quad(g);
        evals += per_cell;
        heap.push(make(*g, coarse, &mut evals, &mut quad));
    }
    let mut total: f64 = heap.iter().map(|c| c.value).sum();
    let mut err: f64 = heap.iter().map(|c| c.err).sum();
    let mut steps = 0usize;
    loop {
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::InvalidArgument("integrand is not finite".into()));
        }
        if err <= tol.abs.max(tol.rel * total.abs()) {
            break;
        }
        let Some(cell) = heap.pop() else { break };
        if tiny(&cell.geom) {
            done.push(cell);
            continue;
        }
        if evals + per_cell * (K * K) as u64 > tol.max_evals {
            return Err(Error::BudgetExceeded(format!("{evals} integrand evaluations, error {err:.3e} vs total {total:.6e}")));
        }
        total -= cell.value;
        err -= cell.err;
        let kids = split(&cell.geom);
        for (k, coarse) in kids.iter().zip(cell.parts) {
            let c = make(*k, coarse, &mut evals, &mut quad);
            total += c.value;
            err += c.err;
            heap.push(c);
        }
        steps += 1;
        if steps.is_multiple_of(64) {
            total = heap.iter().chain(done.iter()).map(|c| c.value).sum();
            err = heap.iter().chain(done.iter()).map(|c| c.err).sum();
        }
    }
    let mut all: Vec<Cell<G, K>> = heap.into_vec();
    all.extend(done);
    all.sort_by_key(|c| c.id);
    let value = all.iter().map(|c| c.value).sum();
    let error = all.iter().map(|c| c.err).sum();
    Ok(Outcome { value, error, evals })
}

pub(crate) fn adaptive_1d(rule: &Rule, intervals: &[(f64, f64)], tol: Tolerance, mut f: impl FnMut(f64) -> f64) -> Result<Outcome> {
    refine::<(f64, f64), 2>(
        intervals,
        tol,
        rule.len() as u64,
        |&(a, b)| {
            let m = 0.5 * (a + b);
            [(a, m), (m, b)]
        },
        |&(a, b)| (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())),
        |&(a, b)| rule.q1(&mut f, a, b),
    )
}

pub(crate) fn adaptive_2d(rule: &Rule, rects: &[Rect], tol: Tolerance, mut f: impl FnMut(f64, f64) -> f64) -> Result<Outcome> {
    let n = rule.len() as u64;
    refine::<Rect, 4>(rects, tol, n * n, |r| r.quarters(), |r| r.tiny(), |r| rule.q2(&mut f, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerance = Tolerance { rel: 1e-12, abs: 0.0, max_evals: 10_000_000 };

    #[test]
    fn integrates_polynomial_exactly() {
        let r = Rule::new(4);
        let o = adaptive_1d(&r, &[(0.0, 2.0)], TOL, |x| x.powi(7)).unwrap();
        assert!((o.value - 32.0).abs() < 1e-12);
    }

    #[test]
    fn resolves_endpoint_singularity() {
        let r = Rule::new(8);
        let o = adaptive_1d(&r, &[(0.0, 1.0)], Tolerance { rel: 1e-10, ..TOL }, |x| x.sqrt().ln()).unwrap();
        assert!((o.value + 0.5).abs() < 1e-9, "{}", o.value);
    }

    #[test]
    fn two_dimensional_gaussian() {
        let r = Rule::new(6);
        let rect = Rect { x0: -6.0, x1: 6.0, y0: -6.0, y1: 6.0 };
        let o = adaptive_2d(&r, &[rect], Tolerance { rel: 1e-11, ..TOL }, |x, y| (-(x * x + y * y)).exp()).unwrap();
        assert!((o.value - std::f64::consts::PI).abs() < 1e-10, "{}", o.value);
    }

    #[test]
    fn budget_is_enforced() {
        let r = Rule::new(6);
        let rect = Rect { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
        let tol = Tolerance { rel: 1e-15, abs: 0.0, max_evals: 2000 };
        let e = adaptive_2d(&r, &[rect], tol, |x, y| 1.0 / (x + y + 1e-9).sqrt()).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded(_)));
    }
}
