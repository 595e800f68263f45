//! Randomized checks of the comparison, square, volume and lemma inequalities.

use std::f64::consts::{PI, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hilbert_core::constructions::{disk, square};
use hilbert_core::measure::{MeasureContext, QuadratureSpec};
use hilbert_core::{metric, Domain, Error, Point, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check { name, status: if ok { Status::Pass } else { Status::Fail }, detail }
}

fn skip(name: &'static str, why: &str) -> Check {
    Check { name, status: Status::Skip, detail: why.to_string() }
}

fn quad(seed: u64) -> QuadratureSpec {
    QuadratureSpec { rel_tol: 1e-6, lod_tol: 1e-6, seed, ..Default::default() }
}

/// Uniform point of the domain by rejection from its bounding box.
pub fn sample_point(d: &Domain, rng: &mut ChaCha8Rng) -> Point {
    let (lo, hi) = d.bounding_box();
    loop {
        let p = Vector::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if d.contains(p) {
            return p;
        }
    }
}

/// Point of `B(0, r)` with uniform direction and uniform Hilbert radius.
fn sample_in_ball(d: &Domain, r: f64, rng: &mut ChaCha8Rng) -> Result<Point, Error> {
    let u = Vector::polar(rng.gen_range(0.0..TAU));
    let rho = r * rng.gen::<f64>();
    Ok(u * metric::ball_radial_point(d, Vector::zero(), u, rho)?.s)
}

fn inside_unit_disk(d: &Domain) -> bool {
    !d.is_polygonal() || (0..d.vertex_count()).all(|k| d.vertex(k).norm() <= 1.0 + 1e-12)
}

/// Runs every check that applies to `d`; the disk and square propositions
/// always run on their own domains.
pub fn run_all(d: &Domain, seed: u64, points: usize, configs: usize) -> Result<Vec<Check>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        klein_distance(points, &mut rng)?,
        klein_volume(seed)?,
        square_bounds(points, &mut rng)?,
        comparison_distance(d, points, &mut rng)?,
        comparison_unit_ball(d, points, &mut rng)?,
        comparison_measure(d, points, &mut rng)?,
        volume_inequality(d, configs, &mut rng)?,
        triangle_lemma(d, configs, &mut rng, seed)?,
        sector_lemma(d, configs, &mut rng, seed)?,
    ])
}

/// `atanh|p|` with `1 − |p|²` formed from exact products, so the reference
/// keeps full precision near the unit circle.
pub fn atanh_norm(p: Point) -> f64 {
    let (x2, y2) = (p.x * p.x, p.y * p.y);
    let (ex, ey) = (p.x.mul_add(p.x, -x2), p.y.mul_add(p.y, -y2));
    let s = x2 + y2;
    let bv = s - x2;
    let es = (x2 - (s - bv)) + (y2 - bv);
    let c = (1.0 - s) - (es + ex + ey);
    let r = p.norm();
    // atanh r = ½ ln((1 + r)² / (1 − r²))
    0.5 * (2.0 * r.ln_1p() - c.ln())
}

pub fn klein_distance(points: usize, rng: &mut ChaCha8Rng) -> Result<Check, Error> {
    let d = disk();
    let (mut worst, mut naive) = (0.0f64, 0.0f64);
    for _ in 0..points {
        let p = sample_point(&d, rng);
        let h = metric::hilbert_distance(&d, Vector::zero(), p)?;
        worst = worst.max((h - atanh_norm(p)).abs());
        naive = naive.max((h - p.norm().atanh()).abs());
    }
    Ok(check(
        "klein-distance",
        worst <= 1e-12,
        format!("max |d(0,p) - atanh|p|| = {worst:.3e} over {points} points (tol 1e-12; against f64 atanh(norm) {naive:.3e})"),
    ))
}

/// Quadrature against `2π(cosh R − 1)` and Monte Carlo; the printed
/// `π/2·sinh²R` is reported alongside.
pub fn klein_volume(seed: u64) -> Result<Check, Error> {
    let ctx = MeasureContext::new(&disk())?;
    let q = QuadratureSpec { mc_samples: 1_000_000, seed, ..Default::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let v = ctx.ball_volume(r, &q)?.value;
        let mc = ctx.ball_volume_mc(r, &q)?;
        let exact = TAU * (r.cosh() - 1.0);
        let rel = (v - exact).abs() / exact;
        let sig = (v - mc.value).abs() / mc.error_estimate;
        ok &= rel <= 1e-3 && sig <= 3.0;
        parts.push(format!(
            "R={r}: quad {v:.6} vs 2π(cosh R-1) rel {rel:.1e}, MC {:.6} ({sig:.2}σ), π/2·sinh²R = {:.6}",
            mc.value,
            0.5 * PI * r.sinh().powi(2)
        ));
    }
    Ok(check("klein-volume", ok, parts.join("; ")))
}

pub fn square_bounds(points: usize, rng: &mut ChaCha8Rng) -> Result<Check, Error> {
    let ctx = MeasureContext::new(&square())?;
    let (mut lo_margin, mut hi_margin) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..points {
        let p = sample_point(ctx.domain(), rng);
        let a = ctx.unit_ball_area(p)?;
        let w = (1.0 - p.x * p.x) * (1.0 - p.y * p.y);
        lo_margin = lo_margin.min(a / (2.0 * w) - 1.0);
        hi_margin = hi_margin.min(1.0 - a / (4.0 * w));
    }
    let center = ctx.unit_ball_area(Vector::zero())?;
    let ok = lo_margin >= -1e-12 && hi_margin >= -1e-12 && (center - 4.0).abs() <= 1e-9;
    Ok(check(
        "square-unit-ball",
        ok,
        format!("min area/lower - 1 = {lo_margin:.3e}, min 1 - area/upper = {hi_margin:.3e} over {points} points; center area {center:.15}"),
    ))
}

pub fn comparison_distance(d: &Domain, points: usize, rng: &mut ChaCha8Rng) -> Result<Check, Error> {
    if !inside_unit_disk(d) {
        return Ok(skip("comparison-distance", "domain not inside the unit disk"));
    }
    let b = disk();
    let mut worst = f64::INFINITY;
    for _ in 0..points {
        let (p, q) = (sample_point(d, rng), sample_point(d, rng));
        let dc = metric::hilbert_distance(d, p, q)?;
        let db = metric::hilbert_distance(&b, p, q)?;
        worst = worst.min((dc - db) / (1.0 + db));
    }
    // equality on chords whose two ends lie on the unit circle
    let mut eq_err = 0.0f64;
    let mut chords = 0;
    if d.is_polygonal() {
        let n = d.vertex_count();
        let on_circle: Vec<usize> = (0..n).filter(|&k| (d.vertex(k).norm() - 1.0).abs() <= 1e-15).collect();
        for _ in 0..if on_circle.len() >= 2 { points.min(1000) } else { 0 } {
            let (i, j) = (on_circle[rng.gen_range(0..on_circle.len())], on_circle[rng.gen_range(0..on_circle.len())]);
            if i == j || (i + 1) % n == j || (j + 1) % n == i {
                continue;
            }
            let (va, vb) = (d.vertex(i), d.vertex(j));
            let (s, t) = (rng.gen_range(0.001..0.999), rng.gen_range(0.001..0.999));
            let (p, q) = (va + (vb - va) * s, va + (vb - va) * t);
            let dc = metric::hilbert_distance(d, p, q)?;
            let db = metric::hilbert_distance(&b, p, q)?;
            eq_err = eq_err.max((dc - db).abs());
            chords += 1;
        }
    }
    Ok(check(
        "comparison-distance",
        worst >= -1e-12 && eq_err <= 1e-10,
        format!("min (d_C - d_disk)/(1 + d_disk) = {worst:.3e} over {points} pairs; equality error {eq_err:.3e} on {chords} chords between circle vertices"),
    ))
}

pub fn comparison_unit_ball(d: &Domain, points: usize, rng: &mut ChaCha8Rng) -> Result<Check, Error> {
    if !inside_unit_disk(d) {
        return Ok(skip("comparison-unit-ball", "domain not inside the unit disk"));
    }
    let (ctx, b) = (MeasureContext::new(d)?, MeasureContext::new(&disk())?);
    let mut worst = f64::INFINITY;
    for _ in 0..points {
        let p = sample_point(d, rng);
        let a = ctx.unit_ball_area(p)?;
        let e = b.unit_ball_area(p)?;
        worst = worst.min(1.0 - a / e);
    }
    Ok(check("comparison-unit-ball", worst >= -1e-12, format!("min 1 - area_C/area_disk = {worst:.3e} over {points} points")))
}

/// `μ_C(A) ≥ μ_disk(A)` for `A = B_C(0, 1)`, both estimated on the same
/// Monte Carlo samples.
pub fn comparison_measure(d: &Domain, points: usize, rng: &mut ChaCha8Rng) -> Result<Check, Error> {
    if !inside_unit_disk(d) {
        return Ok(skip("comparison-measure", "domain not inside the unit disk"));
    }
    let (c, b) = (MeasureContext::new(d)?, MeasureContext::new(&disk())?);
    let (lo, hi) = d.bounding_box();
    let area = (hi.x - lo.x) * (hi.y - lo.y);
    let (mut sc, mut sb) = (0.0, 0.0);
    for _ in 0..points {
        let p = Vector::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if !d.contains(p) || metric::hilbert_distance(d, Vector::zero(), p)? >= 1.0 {
            continue;
        }
        sc += c.busemann_density(p)?;
        sb += b.busemann_density(p)?;
    }
    let (mc, mb) = (sc * area / points as f64, sb * area / points as f64);
    Ok(check(
        "comparison-measure",
        mc >= mb * (1.0 - 1e-12),
        format!("A = B_C(0,1): μ_C(A) ≈ {mc:.6} ≥ μ_disk(A) ≈ {mb:.6} ({points} paired samples)"),
    ))
}

pub fn volume_inequality(d: &Domain, configs: usize, rng: &mut ChaCha8Rng) -> Result<Check, Error> {
    let ctx = MeasureContext::new(d)?;
    let q = quad(0);
    let mut worst = f64::INFINITY;
    for r in [0.5, 1.0, 2.0] {
        let leb = ctx.lebesgue_ball_area(r, &q)?.value;
        for _ in 0..configs {
            let p = sample_in_ball(d, r, rng)?;
            let a = ctx.unit_ball_area(p)?;
            worst = worst.min(8.0 * r + a.ln() - leb.ln());
        }
    }
    Ok(check(
        "volume-inequality",
        worst >= 0.0,
        format!("min ln(e^(8R)·area(B(p)) / Leb(B(0,R))) = {worst:.4} over {} points, R in {{0.5, 1, 2}}", 3 * configs),
    ))
}

/// Edges `[P, Q]` whose antipodes `[−P, −Q]` are also edges.
fn antipodal_edges(d: &Domain) -> Vec<usize> {
    if !d.is_polygonal() || !d.is_centrally_symmetric() {
        return Vec::new();
    }
    (0..d.vertex_count()).filter(|&k| !d.edge_is_arc(k)).collect()
}

pub fn triangle_lemma(d: &Domain, configs: usize, rng: &mut ChaCha8Rng, seed: u64) -> Result<Check, Error> {
    let edges = antipodal_edges(d);
    if edges.is_empty() {
        return Ok(skip("triangle-lemma", "no pair of antipodal boundary segments"));
    }
    let ctx = MeasureContext::new(d)?;
    let q = quad(seed);
    let n = d.vertex_count();
    let picks = 4.min(edges.len());
    let (mut eq_err, mut worst) = (0.0f64, f64::INFINITY);
    for i in 0..picks {
        let k = if i == 0 { edges[0] } else { edges[rng.gen_range(0..edges.len())] };
        let (p, qq) = (d.vertex(k), d.vertex((k + 1) % n));
        let t = Domain::from_vertices(vec![p, qq, -p, -qq])?;
        for _ in 0..configs {
            let (a, b) = (rng.gen::<f64>(), rng.gen::<f64>());
            let (a, b) = if a + b >= 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
            let x = (p * a + qq * b) * 0.999_999;
            if !d.contains(x) || !t.contains(x) {
                continue;
            }
            let dc = metric::hilbert_distance(d, Vector::zero(), x)?;
            let dt = metric::hilbert_distance(&t, Vector::zero(), x)?;
            eq_err = eq_err.max((dc - dt).abs());
        }
        let (ta, mut tb) = (p.angle(), qq.angle());
        if tb < ta {
            tb += TAU;
        }
        for r in [0.5, 1.0, 2.0, 4.0] {
            let v = ctx.sector_ball_volume(r, ta, tb, Some((p, qq)), &q)?.value;
            worst = worst.min(1.0 - v / (TAU * r * r));
        }
    }
    Ok(check(
        "triangle-lemma",
        eq_err <= 1e-10 && worst >= 0.0,
        format!("|d_C - d_T| max {eq_err:.3e}; min 1 - μ(B∩P0Q)/(2πR²) = {worst:.4} on {picks} edges, R in {{0.5, 1, 2, 4}}"),
    ))
}

pub fn sector_lemma(d: &Domain, configs: usize, rng: &mut ChaCha8Rng, seed: u64) -> Result<Check, Error> {
    if !inside_unit_disk(d) {
        return Ok(skip("sector-lemma", "domain not inside the unit disk"));
    }
    let ctx = MeasureContext::new(d)?;
    let q = quad(seed);
    let leb1 = ctx.lebesgue_ball_area(1.0, &q)?.value;
    let mut worst = f64::INFINITY;
    for i in 0..configs {
        let r = [0.5, 1.0, 2.0][i % 3];
        let a = rng.gen_range(0.0..TAU);
        let w = rng.gen_range(1e-3..PI);
        let v = ctx.sector_ball_volume(r, a, a + w, None, &q)?.value;
        let bound = PI * (8.0 * r).exp() / leb1 * w / 2.0;
        worst = worst.min(bound.ln() - v.ln());
    }
    Ok(check("sector-lemma", worst >= 0.0, format!("min ln(bound/μ(B∩sector)) = {worst:.4} over {configs} sectors, R in {{0.5, 1, 2}}")))
}
