//! Polygon boundary with cancellation-free line arithmetic.
//!
//! Points very close to the boundary (gaps down to 1e-280) cannot be stored
//! as Cartesian coordinates, so they are carried as an [`Anchor`]: a point on
//! an edge minus a gap along a unit direction. Signed distances to lines
//! through two vertices are evaluated from angle differences for inscribed
//! polygons, which keeps full relative precision for nearly coincident
//! vertices.

use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Point2, Vec2};
use crate::scalar::wrap_signed;

type V = Vec2<f64>;

/// Polygons with more vertices than this get a level-of-detail tree.
pub(crate) const LOD_MIN_VERTICES: usize = 256;

/// Refuse to materialize implicit polygons beyond this many vertices.
pub(crate) const MAX_MATERIALIZED: usize = 1 << 21;

#[derive(Debug, Clone)]
pub(crate) struct Boundary {
    v: Vec<V>,
    ang: Option<Vec<f64>>,
    polar: Vec<f64>,
    symmetric: bool,
    lod: Option<Lod>,
}

/// Point `(1−λ)·V_e0 + λ·V_e1 − g·u`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Anchor {
    pub e0: usize,
    pub e1: usize,
    pub lam: f64,
    /// `1 − λ`, stored separately for precision near `V_e1`.
    pub mlam: f64,
    pub g: f64,
    pub u: V,
}

impl Boundary {
    pub fn new(domain: &ConvexDomain<f64>) -> Result<Self> {
        let (v, ang) = match domain {
            ConvexDomain::UnitDisk => return Err(Error::NotPolygonal),
            ConvexDomain::Polygon(p) => (p.vertices().to_vec(), p.is_inscribed().then(|| p.polar_angles().to_vec())),
            ConvexDomain::Rings(r) => {
                if r.len() > MAX_MATERIALIZED {
                    return Err(Error::BudgetExceeded(format!("{} vertices exceed the measure limit of {MAX_MATERIALIZED}", r.len())));
                }
                let a = r.materialize_angles();
                (a.iter().map(|&t| Vec2::polar(t)).collect(), Some(a))
            }
        };
        let symmetric = domain.is_centrally_symmetric();
        let polar = match &ang {
            Some(a) => a.clone(),
            None => v.iter().map(|p| crate::scalar::wrap_angle(p.angle())).collect(),
        };
        let mut b = Self { v, ang, polar, symmetric, lod: None };
        if b.n() > LOD_MIN_VERTICES {
            b.lod = Some(Lod::build(&b));
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn vertex(&self, k: usize) -> V {
        self.v[k]
    }

    /// Polar angle of vertex `k` in `[0, 2π)`, increasing with `k`.
    pub fn polar(&self, k: usize) -> f64 {
        self.polar[k]
    }

    /// Edge whose angular sector `[polar(k), polar(k+1))` contains `phi`.
    pub fn edge_at(&self, phi: f64) -> usize {
        let phi = crate::scalar::wrap_angle(phi);
        let n = self.n();
        if phi < self.polar[0] || phi >= self.polar[n - 1] {
            return n - 1;
        }
        self.polar.partition_point(|&a| a <= phi) - 1
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    #[cfg(test)]
    pub fn has_lod(&self) -> bool {
        self.lod.is_some()
    }

    /// `V_b − V_a`.
    pub fn diff(&self, a: usize, b: usize) -> V {
        match &self.ang {
            Some(ang) => self.mid(a, b).perp() * (2.0 * (0.5 * (ang[b] - ang[a])).sin()),
            None => self.v[b] - self.v[a],
        }
    }

    /// Unit vector at the mean angle of two inscribed vertices.
    fn mid(&self, a: usize, b: usize) -> V {
        let ang = self.ang.as_ref().unwrap();
        let s = self.v[a] + self.v[b];
        let r = s.norm();
        if r > 1e-3 {
            // V_a + V_b points at the mean angle only when the two are within π
            if (ang[b] - ang[a]).abs() > std::f64::consts::PI {
                -s / r
            } else {
                s / r
            }
        } else {
            Vec2::polar(0.5 * (ang[a] + ang[b]))
        }
    }

    /// `|V_b − V_a|`.
    pub fn length(&self, a: usize, b: usize) -> f64 {
        match &self.ang {
            Some(ang) => (2.0 * (0.5 * (ang[b] - ang[a])).sin()).abs(),
            None => (self.v[b] - self.v[a]).norm(),
        }
    }

    /// Unit normal on the left of the directed line `V_a → V_b`.
    pub fn left_normal(&self, a: usize, b: usize) -> V {
        match &self.ang {
            Some(ang) => {
                let m = self.mid(a, b);
                if ang[b] < ang[a] {
                    m
                } else {
                    -m
                }
            }
            None => {
                let d = self.v[b] - self.v[a];
                d.perp() / d.norm()
            }
        }
    }

    /// Signed distance of `V_e` from the directed line `V_a → V_b`, positive on
    /// the left.
    pub fn ld(&self, a: usize, b: usize, e: usize) -> f64 {
        if e == a || e == b {
            return 0.0;
        }
        match &self.ang {
            Some(ang) => {
                let s = if ang[b] < ang[a] { -2.0 } else { 2.0 };
                s * (0.5 * (ang[e] - ang[a])).sin() * (0.5 * (ang[e] - ang[b])).sin()
            }
            None => {
                let d = self.v[b] - self.v[a];
                d.cross(self.v[e] - self.v[a]) / d.norm()
            }
        }
    }

    /// Signed distance of an anchored point from the line `V_a → V_b`.
    pub fn d_line(&self, x: &Anchor, a: usize, b: usize) -> f64 {
        x.mlam * self.ld(a, b, x.e0) + x.lam * self.ld(a, b, x.e1) - x.g * self.left_normal(a, b).dot(x.u)
    }

    /// `V_k − x`.
    pub fn rel(&self, x: &Anchor, k: usize) -> V {
        let base =
            if x.lam <= 0.5 { self.diff(x.e0, k) - self.diff(x.e0, x.e1) * x.lam } else { self.diff(x.e1, k) + self.diff(x.e0, x.e1) * x.mlam };
        base + x.u * x.g
    }

    /// Cartesian coordinates of an anchored point (lossy near the boundary).
    pub fn point(&self, x: &Anchor) -> Point2<f64> {
        self.v[x.e0] * x.mlam + self.v[x.e1] * x.lam - x.u * x.g
    }

    /// Edge position `λ` of the direction `u` from the origin on edge `e`,
    /// returned as `(λ, 1 − λ)`.
    pub fn edge_param(&self, e: usize, u: V) -> (f64, f64) {
        let e1 = (e + 1) % self.n();
        let (a, b) = match &self.ang {
            Some(ang) => {
                let phi = u.angle();
                (wrap_signed(phi - ang[e]).sin(), wrap_signed(ang[e1] - phi).sin())
            }
            None => (self.v[e].cross(u), u.cross(self.v[e1])),
        };
        let (a, b) = (a.max(0.0), b.max(0.0));
        let s = a + b;
        if s > 0.0 {
            (a / s, b / s)
        } else {
            (0.0, 1.0)
        }
    }

    /// Anchor for a Cartesian interior point, measured along the ray from the origin.
    pub fn anchor(&self, domain: &ConvexDomain<f64>, p: Point2<f64>) -> Anchor {
        let r = p.norm();
        let u = if r > 1e-300 { p / r } else { Vec2::new(1.0, 0.0) };
        let exit = domain.exit(Vec2::zero(), u);
        let e0 = exit.edge.expect("polygonal domain");
        self.anchor_on_edge(e0, u, exit.t - r)
    }

    /// Anchor at gap `g` below the hit of direction `u` on edge `e`.
    pub fn anchor_on_edge(&self, e: usize, u: V, g: f64) -> Anchor {
        let (lam, mlam) = self.edge_param(e, u);
        Anchor { e0: e, e1: (e + 1) % self.n(), lam, mlam, g, u }
    }

    /// Maximal runs `(first_edge, count)` of consecutive edges with equal
    /// angular step, at least `min_len` long, restricted to edges `< limit`.
    pub fn uniform_runs(&self, limit: usize, min_len: usize) -> Vec<(usize, usize)> {
        let Some(ang) = &self.ang else { return Vec::new() };
        let n = self.n();
        let step = |k: usize| if k + 1 < n { ang[k + 1] - ang[k] } else { ang[0] + std::f64::consts::TAU - ang[k] };
        let mut runs = Vec::new();
        let mut k = 0;
        while k < limit {
            let s0 = step(k);
            let mut j = k + 1;
            // steps are differences of angles up to 2π, so allow a few ulps of those
            while j < limit && (step(j) - s0).abs() <= 1e-9 * s0 + 32.0 * f64::EPSILON {
                j += 1;
            }
            if j - k >= min_len {
                runs.push((k, j - k));
            }
            k = j;
        }
        runs
    }

    /// Whether [`Boundary::select`] may drop vertices at this tolerance.
    pub fn merges(&self, tol: f64) -> bool {
        self.lod.is_some() && tol > 0.0
    }

    /// Sorted vertex subset spanning a polygon inside the domain that still
    /// contains `x` and has the edge `e0 → e1`: a coarse angular net plus the
    /// vertices `e0 ± 2^k`. Its unit-ball area bounds the true one from below.
    pub fn coarse(&self, x: &Anchor, out: &mut Vec<usize>) {
        out.clear();
        let n = self.n();
        let Some(lod) = &self.lod else {
            out.extend(0..n);
            return;
        };
        out.extend_from_slice(&lod.net);
        out.extend([x.e0, x.e1]);
        let mut k = 1;
        while k < n / 2 {
            out.push((x.e0 + k) % n);
            out.push((x.e0 + n - k) % n);
            k *= 2;
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Vertex subset approximating the boundary as seen from `x`, as indices in
    /// increasing order; always contains the edge `e0 → e1`. The unit-ball area
    /// changes by at most about `tol·a_ref` when `a_ref` is below the true area.
    pub fn select(&self, x: &Anchor, tol: f64, a_ref: f64, out: &mut Vec<usize>) {
        out.clear();
        match &self.lod {
            Some(lod) if tol > 0.0 => lod.select(self, x, tol, a_ref, out),
            _ => out.extend(0..self.n()),
        }
    }
}

/// Per-level maximum deviation of the vertices inside each dyadic index
/// block from the chord joining its endpoints.
#[derive(Debug, Clone)]
struct Lod {
    /// `dev[l][i]` for block `[i·2^l, min((i+1)·2^l, n)]`, `l ≥ 1`.
    dev: Vec<Vec<f64>>,
    /// Left unit normal `ν` and offset `ν·V_lo` of each block chord.
    line: Vec<Vec<(V, f64)>>,
    top: usize,
    /// Vertices with consecutive polar gaps at most π/4 (or one original edge).
    net: Vec<usize>,
}

/// Slack on Cartesian chord distances, which lose precision near the boundary.
const LINE_SLACK: f64 = 1e-14;

/// Per-point data shared by the block tests.
struct View {
    p: Point2<f64>,
    /// Left normal and offset of the anchor edge's line.
    nu: V,
    c: f64,
    /// Distance of `x` from that line.
    h: f64,
    tol: f64,
    /// Area error allowed per vertex.
    budget: f64,
}

impl Lod {
    fn build(b: &Boundary) -> Self {
        let n = b.n();
        let top = ((n / 8).max(2) as f64).log2().floor() as usize;
        let mut dev = vec![Vec::new()];
        let mut line = vec![Vec::new()];
        for l in 1..=top {
            let size = 1usize << l;
            let blocks = n.div_ceil(size);
            let d = (0..blocks)
                .map(|i| {
                    let lo = i * size;
                    let hi = ((i + 1) * size).min(n);
                    (lo + 1..hi).map(|k| -b.ld(lo, hi % n, k)).fold(0.0, f64::max)
                })
                .collect();
            dev.push(d);
            line.push(
                (0..blocks)
                    .map(|i| {
                        let lo = i * size;
                        let hi = ((i + 1) * size).min(n);
                        let nu = b.left_normal(lo, hi % n);
                        (nu, nu.dot(b.vertex(lo)))
                    })
                    .collect(),
            );
        }
        let mut net = vec![0];
        let mut i = 0;
        while i + 1 < n {
            let mut j = i + 1;
            while j + 1 < n && b.polar(j + 1) - b.polar(i) <= std::f64::consts::FRAC_PI_4 {
                j += 1;
            }
            net.push(j);
            i = j;
        }
        Self { dev, line, top, net }
    }

    fn select(&self, b: &Boundary, x: &Anchor, tol: f64, a_ref: f64, out: &mut Vec<usize>) {
        let size = 1usize << self.top;
        let nu = b.left_normal(x.e0, x.e1);
        let view = View { p: b.point(x), nu, c: nu.dot(b.vertex(x.e0)), h: b.d_line(x, x.e0, x.e1), tol, budget: tol * a_ref / b.n() as f64 };
        for i in 0..b.n().div_ceil(size) {
            self.visit(b, x, &view, self.top, i, out);
        }
    }

    /// Whether block `(l, i)` may be replaced by its chord. The map from a
    /// boundary point `V` to its unit-ball point `c(V)·(V − x)` is projective
    /// with Jacobian `c³/2`, so replacing the block by its chord moves the unit
    /// ball by at most `c³·dev·len` (both reflected copies), and the bound
    /// `c ≤ 2h_x/(h_V − h_x)` in distances `h` from the anchor edge's line
    /// makes this tiny for blocks far along a flat stretch.
    #[allow(clippy::too_many_arguments)]
    fn accept(&self, b: &Boundary, x: &Anchor, view: &View, l: usize, i: usize, lo: usize, hi: usize) -> bool {
        let n = b.n();
        if lo <= x.e0 && x.e0 < hi {
            return false;
        }
        let (nu, c) = self.line[l][i];
        let d = nu.dot(view.p) - c - LINE_SLACK;
        if d <= 0.0 {
            return false;
        }
        let hv = |k: usize| view.nu.dot(b.vertex(k % n)) - view.c;
        let gap = hv(lo).min(hv(hi)) - view.h;
        let cmax = if gap > LINE_SLACK { (2.0 * view.h / gap).min(2.0) } else { 2.0 };
        let dev = self.dev[l][i];
        cmax * dev <= view.tol * d || cmax.powi(3) * dev * b.length(lo, hi % n) <= view.budget * (hi - lo) as f64
    }

    fn visit(&self, b: &Boundary, x: &Anchor, view: &View, l: usize, i: usize, out: &mut Vec<usize>) {
        let n = b.n();
        let lo = i << l;
        let hi = ((i + 1) << l).min(n);
        if hi - lo <= 1 || l == 0 {
            out.push(lo);
            return;
        }
        if self.accept(b, x, view, l, i, lo, hi) {
            out.push(lo);
            return;
        }
        self.visit(b, x, view, l - 1, 2 * i, out);
        if (2 * i + 1) << (l - 1) < n {
            self.visit(b, x, view, l - 1, 2 * i + 1, out);
        }
    }
}
