//! Exact tangent unit balls of polygonal domains.
//!
//! `F(x,·)` is even, so the unit ball `K` is centrally symmetric. Its vertices
//! lie on the rays towards the domain vertices: `y_b = c_b·(V_b − x)` with
//! `c_b = 2t⁻/(1+t⁻) = 2·D_j(x)/D_j(V_b)`, where `D_j` is the signed distance to
//! the edge hit by the backward ray, together with the reflections `−y_b`.
//! Both families are already sorted by angle; a two-pointer sweep merges
//! them and the shoelace sum runs over pairs `c_a·c_b·cross(V_a−x, V_b−x)`.

use std::cell::RefCell;

use super::boundary::{Anchor, Boundary};
use crate::geometry::Vec2;

type V = Vec2<f64>;

/// Cheap cross product is trusted above this fraction of `|r_a||r_b|`.
const CROSS_TRUST: f64 = 1e-4;

/// Thresholds above which Cartesian shortcuts are accurate to `tol/100`
/// relative: `(cross fraction, absolute line distance)`.
fn trust(tol: f64) -> (f64, f64) {
    if tol > 0.0 {
        let t = 100.0 * f64::EPSILON / tol;
        (t.min(CROSS_TRUST), t)
    } else {
        (CROSS_TRUST, f64::INFINITY)
    }
}

#[derive(Default)]
struct Scratch {
    idx: Vec<usize>,
    r: Vec<V>,
    rn: Vec<f64>,
    j: Vec<usize>,
    c: Vec<f64>,
    seq: Vec<(usize, bool)>,
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::default());
}

/// Area of the unit ball at an anchored point, optionally with its vertices.
pub(crate) fn area_at(b: &Boundary, x: &Anchor, lod_tol: f64, vertices: Option<&mut Vec<V>>) -> f64 {
    SCRATCH.with(|s| {
        let s = &mut *s.borrow_mut();
        let a_ref = if b.merges(lod_tol) {
            b.coarse(x, &mut s.idx);
            compute(b, x, s, None, trust(lod_tol))
        } else {
            0.0
        };
        b.select(x, lod_tol, a_ref, &mut s.idx);
        compute(b, x, s, vertices, trust(lod_tol))
    })
}

fn compute(b: &Boundary, x: &Anchor, s: &mut Scratch, vertices: Option<&mut Vec<V>>, (cross_trust, line_trust): (f64, f64)) -> f64 {
    let idx = &s.idx;
    let p = b.point(x);
    let m = idx.len();
    s.r.clear();
    s.rn.clear();
    for &k in idx {
        let r = b.rel(x, k);
        s.r.push(r);
        s.rn.push(r.norm());
    }
    let (r, rn) = (&s.r, &s.rn);
    // cross(V_a − x, V_b − x) by positions in idx
    let cross = |a: usize, c: usize| -> f64 {
        if a == c {
            return 0.0;
        }
        let q = r[a].cross(r[c]);
        if q.abs() > cross_trust * rn[a] * rn[c] {
            q
        } else {
            b.length(idx[a], idx[c]) * b.d_line(x, idx[a], idx[c])
        }
    };

    // j(bb): last position after bb whose direction is within π counterclockwise
    s.j.clear();
    let mut j = 1usize;
    for bb in 0..m {
        j = j.max(bb + 1);
        while j + 1 < bb + m && cross(bb, (j + 1) % m) > 0.0 {
            j += 1;
        }
        s.j.push(j);
    }

    s.c.clear();
    for bb in 0..m {
        let jj = s.j[bb] % m;
        let (ea, eb) = (idx[jj], idx[(jj + 1) % m]);
        let nu = b.left_normal(ea, eb);
        let va = b.vertex(ea);
        let (dx, dv) = (nu.dot(p - va), nu.dot(b.vertex(idx[bb]) - va));
        let (dx, dv) = if dx > line_trust && dv > line_trust { (dx, dv) } else { (b.d_line(x, ea, eb), b.ld(ea, eb, idx[bb])) };
        s.c.push(2.0 * dx / dv);
    }

    // merged angular order: r_i, then reflections landing in sector (i, i+1)
    let start = (0..m).find(|&bb| s.j[bb] % m != s.j[(bb + m - 1) % m] % m).unwrap_or(0);
    let mut buckets: Vec<(usize, usize)> = vec![(usize::MAX, 0); m];
    let mut order: Vec<usize> = Vec::with_capacity(m);
    for t in 0..m {
        let bb = (start + t) % m;
        let key = s.j[bb] % m;
        if buckets[key].0 == usize::MAX {
            buckets[key] = (order.len(), 0);
        }
        buckets[key].1 += 1;
        order.push(bb);
    }
    s.seq.clear();
    for (i, &(first, count)) in buckets.iter().enumerate() {
        s.seq.push((i, true));
        if first != usize::MAX {
            for &bb in &order[first..first + count] {
                s.seq.push((bb, false));
            }
        }
    }

    let c = &s.c;
    let seq = &s.seq;
    let len = seq.len();
    let mut twice = 0.0;
    for t in 0..len {
        let (a, sa) = seq[t];
        let (d, sd) = seq[(t + 1) % len];
        let term = c[a] * c[d] * cross(a, d);
        twice += if sa == sd { term } else { -term };
    }
    if let Some(out) = vertices {
        out.clear();
        for &(a, sa) in seq {
            let y = r[a] * c[a];
            out.push(if sa { y } else { -y });
        }
    }
    0.5 * twice
}
