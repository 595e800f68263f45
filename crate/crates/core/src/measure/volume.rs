//! Metric-ball and sector volumes.
//!
//! Polygonal domains are integrated edge by edge. On the triangle spanned by
//! the origin and an edge `V1 V2`, a point is addressed by its Hilbert radius
//! `ρ` from the origin and by `τ ∈ [−1, 1]`, where the edge position is
//! `λ = (1+η)/2` with `η = tanh(ρτ)/tanh ρ`. For large `ρ` this spreads the
//! corner regions (`λ ~ e^{−2ρ}`), where the measure concentrates, evenly over
//! `τ`. Long runs of congruent edges are summed by Richardson extrapolation of
//! strided partial sums instead of edge by edge.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI, TAU};

use rayon::prelude::*;

use super::boundary::{Anchor, Boundary};
use super::quadrature::{adaptive_1d, adaptive_2d, Outcome, Rect, Rule, Tolerance};
use super::unit_ball::area_at;
use super::{MeasureContext, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Vec2};
use crate::metric::{distance_along_chord, radial_from_chord};

type V = Vec2<f64>;

/// Largest radius accepted by the volume integrators; beyond it the corner
/// scale `e^{−2R}` leaves the double range.
pub const MAX_RADIUS: f64 = 300.0;

/// Runs shorter than this are integrated edge by edge.
const MIN_RUN: usize = 32;

/// Blocks of at most this many edges are summed directly.
const DIRECT_BLOCK: usize = 16;

fn ln_sinh(a: f64) -> f64 {
    if a < 20.0 {
        a.sinh().ln()
    } else {
        a - LN_2 + (-(-2.0 * a).exp()).ln_1p()
    }
}

fn ln_cosh(b: f64) -> f64 {
    let b = b.abs();
    b - LN_2 + (-2.0 * b).exp().ln_1p()
}

/// `(1+η)/2`, `(1−η)/2` and `dη/dτ` for `η = tanh(ρτ)/tanh ρ`.
fn eta_map(rho: f64, tau: f64) -> (f64, f64, f64) {
    if rho < 1e-6 {
        return (0.5 * (1.0 + tau), 0.5 * (1.0 - tau), 1.0);
    }
    let lsr = ln_sinh(rho);
    let lc = ln_cosh(rho * tau);
    let plus = 0.5 * (ln_sinh(rho * (1.0 + tau)) - lsr - lc).exp();
    let minus = 0.5 * (ln_sinh(rho * (1.0 - tau)) - lsr - lc).exp();
    let deta = rho * (-2.0 * lc).exp() / rho.tanh();
    (plus, minus, deta)
}

/// Part of edge `edge` between positions `la < lb`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Panel {
    edge: usize,
    la: f64,
    lb: f64,
}

impl Panel {
    fn full(edge: usize) -> Self {
        Self { edge, la: 0.0, lb: 1.0 }
    }

    fn is_full(&self) -> bool {
        self.la == 0.0 && self.lb == 1.0
    }
}

enum Task {
    Panel(Panel),
    Run { first: usize, count: usize },
}

fn add(a: Outcome, b: Outcome) -> Outcome {
    Outcome { value: a.value + b.value, error: a.error + b.error, evals: a.evals + b.evals }
}

const ZERO: Outcome = Outcome { value: 0.0, error: 0.0, evals: 0 };

impl MeasureContext {
    pub(crate) fn check_radius(&self, r: f64) -> Result<()> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be positive and finite, got {r}")));
        }
        if r > MAX_RADIUS {
            return Err(Error::InvalidArgument(format!("radius {r} exceeds the supported maximum {MAX_RADIUS}")));
        }
        Ok(())
    }

    fn tolerance(&self, q: &QuadratureSpec, rel: f64) -> Tolerance {
        Tolerance { rel, abs: 0.0, max_evals: q.max_evals }
    }

    /// Integral over one edge panel.
    fn panel_integral(&self, b: &Boundary, p: Panel, r: f64, q: &QuadratureSpec, rel: f64, abs: f64) -> Result<Outcome> {
        let rule = Rule::new(q.radial_order);
        let n = b.n();
        let (e0, e1) = (p.edge, (p.edge + 1) % n);
        let d = b.diff(e0, e1);
        let (v0, v1) = (b.vertex(e0), b.vertex(e1));
        let w = p.lb - p.la;
        let sym = b.is_symmetric();
        let f = |rho: f64, tau: f64| -> f64 {
            let (plus, minus, deta) = eta_map(rho, tau);
            let lam = p.la + w * plus;
            let mlam = (1.0 - p.lb) + w * minus;
            let pplus = if lam <= 0.5 { v0 + d * lam } else { v1 - d * mlam };
            let tp = pplus.norm();
            let u = pplus / tp;
            let tm = if sym { tp } else { self.domain.exit(Vec2::zero(), -u).t };
            let rs = radial_from_chord(tm, tp, rho);
            let x = Anchor { e0, e1, lam, mlam, g: rs.gap, u };
            let area = area_at(b, &x, q.lod_tol, None);
            let dtheta = pplus.cross(d) / (tp * tp);
            PI / area * rs.s * rs.ds_drho * dtheta * 0.5 * w * deta
        };
        let nr = (r / 4.0).ceil().max(1.0) as usize;
        let nt = 2usize << q.angular_refinement.min(10);
        let mut rects = Vec::with_capacity(nr * nt);
        for i in 0..nr {
            for j in 0..nt {
                rects.push(Rect {
                    x0: r * i as f64 / nr as f64,
                    x1: r * (i + 1) as f64 / nr as f64,
                    y0: -1.0 + 2.0 * j as f64 / nt as f64,
                    y1: -1.0 + 2.0 * (j + 1) as f64 / nt as f64,
                });
            }
        }
        adaptive_2d(&rule, &rects, Tolerance { abs, ..self.tolerance(q, rel) }, f)
    }

    /// Sum over a run of congruent edges `first..first+count` to within
    /// `max(rel·|sum|, abs)`. The edge integrals vary smoothly along the run
    /// except for power-law growth at its ends, so dyadic blocks are refined
    /// globally, worst first, until the summed extrapolation error is small.
    #[allow(clippy::too_many_arguments)]
    fn run_sum(&self, b: &Boundary, first: usize, count: usize, r: f64, q: &QuadratureSpec, rel: f64, abs: f64) -> Result<Outcome> {
        // edge errors enter the sum with total weight about `count`
        let edge_rel = 0.1 * rel;
        let edge_abs = 0.1 * abs / count as f64;
        let mut cache: BTreeMap<usize, Outcome> = BTreeMap::new();
        let fetch = |cache: &mut BTreeMap<usize, Outcome>, js: Vec<usize>| -> Result<()> {
            let mut missing: Vec<usize> = js.into_iter().filter(|j| !cache.contains_key(j)).collect();
            missing.sort_unstable();
            missing.dedup();
            let vals: Vec<Result<Outcome>> = missing.par_iter().map(|&j| self.panel_integral(b, Panel::full(j), r, q, edge_rel, edge_abs)).collect();
            for (j, v) in missing.into_iter().zip(vals) {
                cache.insert(j, v?);
            }
            Ok(())
        };
        let last = first + count - 1;
        if last == first {
            fetch(&mut cache, vec![first])?;
            return Ok(cache[&first]);
        }
        // inclusive blocks [a, a + 2^m] covering first..=last, overlapping at endpoints
        let mut blocks: Vec<(usize, usize, f64, f64)> = Vec::new();
        let mut fresh = Vec::new();
        let mut a = first;
        while a < last {
            let span = last - a;
            let size = if span >= DIRECT_BLOCK { 1usize << (usize::BITS - 1 - span.leading_zeros()) } else { span };
            fresh.push((a, a + size));
            a += size;
        }
        loop {
            fetch(&mut cache, fresh.iter().flat_map(|&(a, b)| block_samples(a, b)).collect())?;
            blocks.extend(fresh.drain(..).map(|(a, b)| {
                let (v, e) = block_estimate(a, b, &cache);
                (a, b, v, e)
            }));
            blocks.sort_by_key(|t| t.0);
            let shared: f64 = blocks[1..].iter().map(|t| cache[&t.0].value).sum();
            let value = blocks.iter().map(|t| t.2).sum::<f64>() - shared;
            let err: f64 = blocks.iter().map(|t| t.3).sum();
            if err <= abs.max(rel * value.abs()) {
                let evals = cache.values().map(|o| o.evals).sum();
                let error = err + cache.values().map(|o| o.error).sum::<f64>();
                return Ok(Outcome { value, error, evals });
            }
            let worst = blocks.iter().map(|t| t.3).fold(0.0, f64::max);
            let (split, keep): (Vec<_>, Vec<_>) = blocks.drain(..).partition(|t| t.3 >= 0.25 * worst);
            blocks = keep;
            for (a, b, _, _) in split {
                let m = a + (b - a) / 2;
                fresh.push((a, m));
                fresh.push((m, b));
            }
        }
    }

    /// Panels covering the angular range `[ta, ta + width]` (the whole boundary
    /// when `width` is `None`), plus the symmetry multiplier.
    fn panels(&self, b: &Boundary, range: Option<(f64, f64)>) -> (Vec<Panel>, f64) {
        let n = b.n();
        let (mut panels, factor) = match range {
            None if b.is_symmetric() => ((0..n / 2).map(Panel::full).collect::<Vec<_>>(), 2.0),
            None => ((0..n).map(Panel::full).collect(), 1.0),
            Some((ta, width)) => (clip(b, ta, width), 1.0),
        };
        if !b.is_symmetric() {
            // t⁻ has kinks where the backward ray crosses a vertex
            let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); n];
            for j in 0..n {
                let phi = b.polar(j) + PI;
                let k = b.edge_at(phi);
                let (lam, _) = b.edge_param(k, Vec2::polar(phi));
                if lam > 1e-12 && lam < 1.0 - 1e-12 {
                    cuts[k].push(lam);
                }
            }
            let mut out = Vec::with_capacity(panels.len() + n);
            for p in panels {
                let mut pts: Vec<f64> = cuts[p.edge].iter().copied().filter(|&l| l > p.la && l < p.lb).collect();
                pts.sort_by(f64::total_cmp);
                let mut la = p.la;
                for l in pts {
                    out.push(Panel { edge: p.edge, la, lb: l });
                    la = l;
                }
                out.push(Panel { edge: p.edge, la, lb: p.lb });
            }
            panels = out;
        }
        (panels, factor)
    }

    fn tasks(&self, b: &Boundary, panels: Vec<Panel>) -> Vec<Task> {
        let n = b.n();
        let mut run_of = vec![usize::MAX; n];
        if b.is_symmetric() {
            for (i, &(f, c)) in b.uniform_runs(n, MIN_RUN).iter().enumerate() {
                run_of[f..f + c].iter_mut().for_each(|x| *x = i);
            }
        }
        let mut tasks = Vec::new();
        let mut i = 0;
        while i < panels.len() {
            let p = panels[i];
            let id = run_of[p.edge];
            if p.is_full() && id != usize::MAX {
                let mut j = i + 1;
                while j < panels.len() && panels[j].is_full() && run_of[panels[j].edge] == id && panels[j].edge == panels[j - 1].edge + 1 {
                    j += 1;
                }
                if j - i >= MIN_RUN {
                    tasks.push(Task::Run { first: p.edge, count: j - i });
                    i = j;
                    continue;
                }
            }
            tasks.push(Task::Panel(p));
            i += 1;
        }
        tasks
    }

    fn run_tasks(&self, b: &Boundary, tasks: &[Task], r: f64, q: &QuadratureSpec, rel: f64, abs: f64) -> Result<Outcome> {
        let results: Vec<Result<Outcome>> = tasks
            .par_iter()
            .map(|t| match *t {
                Task::Panel(p) => self.panel_integral(b, p, r, q, rel, abs),
                Task::Run { first, count } => self.run_sum(b, first, count, r, q, rel, abs),
            })
            .collect();
        let mut total = ZERO;
        for res in results {
            total = add(total, res?);
        }
        Ok(total)
    }

    /// Whole-boundary or clipped volume. Runs of short edges are summed to an
    /// absolute tolerance taken from the other panels, so that a tiny run is
    /// not resolved to its own relative accuracy.
    pub(crate) fn polygon_volume(&self, b: &Boundary, r: f64, range: Option<(f64, f64)>, q: &QuadratureSpec) -> Result<Outcome> {
        let (panels, factor) = self.panels(b, range);
        let tasks = self.tasks(b, panels);
        // edge panels first: their (positive) sum bounds the total from below
        // and fixes an absolute tolerance for the runs
        let (runs, singles): (Vec<Task>, Vec<Task>) = tasks.into_iter().partition(|t| matches!(t, Task::Run { .. }));
        let base = self.run_tasks(b, &singles, r, q, q.rel_tol, 0.0)?;
        let abs = 0.5 * q.rel_tol * base.value.abs() / runs.len().max(1) as f64;
        let total = add(base, self.run_tasks(b, &runs, r, q, q.rel_tol, abs)?);
        let evals = total.evals;
        if evals > q.max_evals {
            return Err(Error::BudgetExceeded(format!("{evals} integrand evaluations")));
        }
        Ok(Outcome { value: factor * total.value, error: factor * total.error, evals })
    }

    /// Density, radial factors and Jacobian along direction `theta` at Hilbert
    /// radius `rho` from the origin: returns `density · s · ds/dρ`.
    fn polar_integrand(&self, theta: f64, rho: f64, lod_tol: f64) -> f64 {
        let u = Vec2::polar(theta);
        let origin = Vec2::zero();
        let fwd = self.domain.exit(origin, u);
        let tm = self.domain.exit(origin, -u).t;
        let rs = radial_from_chord(tm, fwd.t, rho);
        let density = match (&self.boundary, fwd.edge) {
            (Some(b), Some(e)) => PI / area_at(b, &b.anchor_on_edge(e, u, rs.gap), lod_tol, None),
            _ => {
                let one_minus = rs.gap * (2.0 - rs.gap);
                one_minus.powf(-1.5)
            }
        };
        density * rs.s * rs.ds_drho
    }

    /// Angular panel boundaries over `[ta, tb]`: vertex directions when there
    /// are few, otherwise a uniform split.
    fn angular_breaks(&self, ta: f64, tb: f64) -> Vec<f64> {
        let mut br = vec![ta];
        if let Some(b) = &self.boundary {
            if b.n() <= 4096 {
                let mut dirs: Vec<f64> = Vec::new();
                for k in 0..b.n() {
                    for shift in [-TAU, 0.0, TAU, 2.0 * TAU] {
                        let a = b.polar(k) + shift;
                        if a > ta && a < tb {
                            dirs.push(a);
                        }
                    }
                }
                dirs.sort_by(f64::total_cmp);
                br.extend(dirs);
            } else {
                let m = 1024;
                br.extend((1..m).map(|i| ta + (tb - ta) * i as f64 / m as f64));
            }
        } else {
            br.extend((1..4).map(|i| ta + (tb - ta) * i as f64 / 4.0));
        }
        br.push(tb);
        br.dedup_by(|x, y| *x - *y <= 1e-15);
        br
    }

    /// Volume of `B(0, r) ∩ {θ ∈ [ta, tb]}`, radially limited by an optional cap line.
    pub(crate) fn polar_volume(&self, r: f64, ta: f64, tb: f64, cap: Option<(Point2<f64>, Point2<f64>)>, q: &QuadratureSpec) -> Result<Outcome> {
        let rule = Rule::new(q.radial_order);
        let br = self.angular_breaks(ta, tb);
        let rho_max = |theta: f64| -> f64 {
            let Some((p, qq)) = cap else { return r };
            let u = Vec2::polar(theta);
            let dir = qq - p;
            let den = u.cross(dir);
            if den == 0.0 {
                return r;
            }
            let tc = p.cross(dir) / den;
            let origin = Vec2::zero();
            let tp = self.domain.exit(origin, u).t;
            if !(tc > 0.0) || tc >= tp {
                return r;
            }
            let tm = self.domain.exit(origin, -u).t;
            distance_along_chord(tm, tp, tc, tp - tc).min(r)
        };
        let f = |sigma: f64, theta: f64| -> f64 {
            let rm = rho_max(theta);
            rm * self.polar_integrand(theta, sigma * rm, q.lod_tol)
        };
        let rects: Vec<Rect> = br.windows(2).map(|w| Rect { x0: 0.0, x1: 1.0, y0: w[0], y1: w[1] }).collect();
        let results: Vec<Result<Outcome>> = rects.par_chunks(16).map(|chunk| adaptive_2d(&rule, chunk, self.tolerance(q, q.rel_tol), f)).collect();
        let mut total = ZERO;
        for res in results {
            total = add(total, res?);
        }
        Ok(total)
    }

    /// Lebesgue area `∫ ½ s(r, θ)² dθ` of the metric ball.
    pub(crate) fn lebesgue_area(&self, r: f64, q: &QuadratureSpec) -> Result<Outcome> {
        let rule = Rule::new(q.radial_order);
        let br = self.angular_breaks(0.0, TAU);
        let intervals: Vec<(f64, f64)> = br.windows(2).map(|w| (w[0], w[1])).collect();
        let origin = Vec2::zero();
        let f = |theta: f64| {
            let u: V = Vec2::polar(theta);
            let tp = self.domain.exit(origin, u).t;
            let tm = self.domain.exit(origin, -u).t;
            let s = radial_from_chord(tm, tp, r).s;
            0.5 * s * s
        };
        let results: Vec<Result<Outcome>> =
            intervals.par_chunks(64).map(|chunk| adaptive_1d(&rule, chunk, self.tolerance(q, q.rel_tol), f)).collect();
        let mut total = ZERO;
        for res in results {
            total = add(total, res?);
        }
        Ok(total)
    }
}

/// Edge indices needed to estimate the block `[a, b]`.
fn block_samples(a: usize, b: usize) -> Vec<usize> {
    let c = b - a;
    if c <= DIRECT_BLOCK || !c.is_multiple_of(8) {
        (a..=b).collect()
    } else {
        (0..=8).map(|k| a + k * (c / 8)).collect()
    }
}

/// `Σ_{j=a}^{b} I(j)` and its error: a direct sum for short blocks, otherwise
/// trapezoid sums at strides `c/2, c/4, c/8` extrapolated to stride 1 in `h²`.
fn block_estimate(a: usize, b: usize, cache: &BTreeMap<usize, Outcome>) -> (f64, f64) {
    let c = b - a;
    if c <= DIRECT_BLOCK || !c.is_multiple_of(8) {
        return ((a..=b).map(|j| cache[&j].value).sum(), 0.0);
    }
    let h = c / 8;
    let f: Vec<f64> = (0..=8).map(|k| cache[&(a + k * h)].value).collect();
    let trap = |stride: usize| -> f64 {
        let mut s = 0.5 * (f[0] + f[8]);
        let mut k = stride;
        while k < 8 {
            s += f[k];
            k += stride;
        }
        s * (stride * h) as f64
    };
    let (t2, t4, t8) = (trap(4), trap(2), trap(1));
    let (x2, x4, x8) = (((4 * h) as f64).powi(2), ((2 * h) as f64).powi(2), (h as f64).powi(2));
    let lin = t8 + (t8 - t4) * (1.0 - x8) / (x8 - x4);
    let l = |xi: f64, xj: f64, xk: f64| (1.0 - xj) * (1.0 - xk) / ((xi - xj) * (xi - xk));
    let quad = t2 * l(x2, x4, x8) + t4 * l(x4, x2, x8) + t8 * l(x8, x2, x4);
    (quad + 0.5 * (f[0] + f[8]), (quad - lin).abs())
}

/// Panels of the edges meeting the angular range `[ta, ta + width]`.
fn clip(b: &Boundary, ta: f64, width: f64) -> Vec<Panel> {
    let n = b.n();
    let mut out = Vec::new();
    let a0 = crate::scalar::wrap_angle(ta);
    let a1 = a0 + width;
    for k in 0..n {
        let lo = b.polar(k);
        let hi = if k + 1 < n { b.polar(k + 1) } else { b.polar(0) + TAU };
        for shift in [-TAU, 0.0, TAU] {
            let (s, e) = (lo + shift, hi + shift);
            let (x, y) = (s.max(a0), e.min(a1));
            if y <= x {
                continue;
            }
            let la = if x <= s { 0.0 } else { b.edge_param(k, Vec2::polar(x)).0 };
            let lb = if y >= e { 1.0 } else { b.edge_param(k, Vec2::polar(y)).0 };
            if lb > la {
                out.push(Panel { edge: k, la, lb });
            }
        }
    }
    // order panels by angle so runs of consecutive edges stay adjacent
    out.sort_by(|p, q| {
        let key = |p: &Panel| {
            let a = b.polar(p.edge);
            if a < a0 - 1e-15 {
                a + TAU
            } else {
                a
            }
        };
        key(p).total_cmp(&key(q)).then(p.la.total_cmp(&q.la))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_map_small_and_large_rho() {
        for &rho in &[1e-8, 0.3, 5.0, 40.0] {
            for &tau in &[-0.9, -0.2, 0.0, 0.5] {
                let (p, m, d) = eta_map(rho, tau);
                let eta = if rho < 1e-6 { tau } else { (rho * tau).tanh() / rho.tanh() };
                assert!((p - 0.5 * (1.0 + eta)).abs() < 1e-14 && (m - 0.5 * (1.0 - eta)).abs() < 1e-14);
                let h = 1e-6;
                let fd = if rho < 1e-6 { 1.0 } else { ((rho * (tau + h)).tanh() - (rho * (tau - h)).tanh()) / (2.0 * h * rho.tanh()) };
                assert!((d - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{rho} {tau}: {d} vs {fd}");
            }
        }
        // corner scale is resolved far below double epsilon
        let (p, _, _) = eta_map(30.0, -0.99);
        assert!(p > 0.0 && p < 1e-24);
    }
}
