//! One PASS/FAIL line per acceptance criterion, at the stated tolerances.
//! Run with `cargo test -p hilbert-cli --test acceptance -- --nocapture`.

use std::f64::consts::{PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilbert_cli::verify::{self, Status};
use hilbert_core::constructions::{disk, no_limit_domain, regular_polygon, square, zero_entropy_domain, TowerSequenceSpec};
use hilbert_core::entropy::{cubic_growth_check, oscillation_experiment};
use hilbert_core::measure::{MeasureContext, QuadratureSpec};
use hilbert_core::metric::hilbert_distance;
use hilbert_core::{Domain, Error, Matrix, Vector};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Result<Outcome, Error> {
    Ok(Outcome { ok, detail })
}

fn from_checks(checks: &[verify::Check]) -> Outcome {
    Outcome { ok: checks.iter().all(|c| c.status == Status::Pass), detail: checks.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" | ") }
}

fn run(k: usize, limit: Option<Duration>, f: impl FnOnce() -> Result<Outcome, Error>) -> bool {
    let t = Instant::now();
    let res = f();
    let took = t.elapsed();
    let (ok, detail) = match res {
        Ok(o) => (o.ok, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = limit.is_none_or(|l| took <= l);
    let limit_txt = limit.map_or(String::new(), |l| format!(" (limit {:.0} s)", l.as_secs_f64()));
    let time_txt = if in_time { String::new() } else { " TOO SLOW".to_string() };
    let tag = if ok && in_time { "PASS" } else { "FAIL" };
    println!("{tag} criterion {k}: {detail} [{:.2} s{limit_txt}{time_txt}]", took.as_secs_f64());
    ok && in_time
}

fn c1() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = verify::klein_distance(10_000, &mut rng)?;
    outcome(c.status == Status::Pass, c.detail)
}

fn c2() -> Result<Outcome, Error> {
    let ctx = MeasureContext::new(&disk())?;
    let q = QuadratureSpec { mc_samples: 10_000_000, ..Default::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let v = ctx.ball_volume(r, &q)?.value;
        let mc = ctx.ball_volume_mc(r, &q)?;
        let exact = TAU * (r.cosh() - 1.0);
        let rel = (v - exact).abs() / exact;
        let sig = (v - mc.value).abs() / mc.error_estimate;
        let printed = 0.5 * PI * r.sinh().powi(2);
        let printed_sig = (printed - mc.value).abs() / mc.error_estimate;
        ok &= rel <= 1e-3 && sig <= 3.0;
        parts.push(format!(
            "R={r}: quad {v:.8}, MC {:.8} ± {:.2e} ({sig:.2}σ), 2π(cosh R-1) rel {rel:.1e}; π/2·sinh²R = {printed:.6} is {printed_sig:.0}σ off",
            mc.value, mc.error_estimate
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c3() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = verify::square_bounds(10_000, &mut rng)?;
    outcome(c.status == Status::Pass, c.detail)
}

/// Centrally symmetric quadrilateral with vertices on the unit circle.
fn inscribed_quadrilateral(rng: &mut ChaCha8Rng) -> Result<Domain, Error> {
    let a = rng.gen_range(0.0..PI);
    let b = a + rng.gen_range(0.2..PI - 0.2);
    let (p, q) = (Vector::polar(a), Vector::polar(b));
    Domain::from_vertices(vec![p, q, -p, -q])
}

fn c4() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sq = verify::triangle_lemma(&square(), 200, &mut rng, 4)?;
    let mut quads = Vec::new();
    for _ in 0..10 {
        let d = inscribed_quadrilateral(&mut rng)?;
        quads.push(verify::triangle_lemma(&d, 200, &mut rng, 4)?);
    }
    let bad: Vec<String> = quads.iter().filter(|c| c.status != Status::Pass).map(|c| c.detail.clone()).collect();
    let ok = sq.status == Status::Pass && bad.is_empty();
    outcome(ok, format!("square quadrant: {}; 10 inscribed quadrilaterals, failing: {:?}", sq.detail, bad))
}

fn c5() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (tower, _) = no_limit_domain(&TowerSequenceSpec::paper())?;
    let mut checks = Vec::new();
    for d in [tower, zero_entropy_domain(30)?] {
        // 3 radii × 334 points and 1000 sectors
        checks.push(verify::volume_inequality(&d, 334, &mut rng)?);
        checks.push(verify::sector_lemma(&d, 1000, &mut rng, 5)?);
    }
    Ok(from_checks(&checks))
}

fn c6() -> Result<Outcome, Error> {
    let r = 1e-3;
    let q = QuadratureSpec { rel_tol: 1e-8, lod_tol: 1e-8, ..Default::default() };
    let (tower, _) = no_limit_domain(&TowerSequenceSpec::paper())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, d) in [("disk", disk()), ("square", square()), ("no-limit", tower), ("zero-entropy", zero_entropy_domain(30)?)] {
        let ratio = MeasureContext::new(&d)?.ball_volume(r, &q)?.value / (PI * r * r);
        ok &= (0.99..=1.01).contains(&ratio);
        parts.push(format!("{name} {ratio:.8}"));
    }
    outcome(ok, format!("μ(B(0,1e-3))/(πR²): {}", parts.join(", ")))
}

fn c7() -> Result<Outcome, Error> {
    let q = QuadratureSpec { rel_tol: 1e-6, lod_tol: 1e-6, ..Default::default() };
    let radii: Vec<f64> = (1..=15).map(f64::from).collect();
    let rep = cubic_growth_check(30, &radii, &q)?;
    let worst = rep.samples.iter().map(|s| s.mu / s.bound).fold(0.0f64, f64::max);
    let ok = rep.failures.is_empty() && rep.samples.len() == 15 && rep.all_within() && rep.decreasing_on(5.0, 15.0);
    outcome(
        ok,
        format!(
            "N=30, τ = {:.6}, max μ/((144π+τ)R³) = {worst:.3e}, ratio decreasing on [5,15]: {}, ratio(5) {:.6} ratio(15) {:.6}",
            rep.tau,
            rep.decreasing_on(5.0, 15.0),
            rep.samples[4].ratio,
            rep.samples[14].ratio
        ),
    )
}

fn c8() -> Result<Outcome, Error> {
    let q = QuadratureSpec { rel_tol: 1e-4, lod_tol: 1e-4, ..Default::default() };
    let rep = oscillation_experiment(&TowerSequenceSpec::paper(), &q, 8)?;
    let in_window = (5.0..=15.0).contains(&rep.peak_r);
    let drop_ok = rep.last_ratio <= rep.peak_ratio - 0.1;
    // largest ratio inside the window, for the record
    let (wr, wv) = rep
        .profile
        .samples
        .iter()
        .filter(|s| (5.0..=15.0).contains(&s.r))
        .map(|s| (s.r, s.ratio))
        .fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    outcome(
        rep.profile.failures.is_empty() && in_window && drop_ok,
        format!(
            "ring 1 points {}, peak ratio {:.6} at R* = {:.4} (in [5,15]: {in_window}), best in [5,15] {wv:.6} at {wr:.4}, ratio({}) = {:.6}, drop {:.4} (≥ 0.1: {drop_ok}), {} radii",
            rep.construction.ring_vertex_counts.get(1).copied().flatten().map_or("?".to_string(), |n| n.to_string()),
            rep.peak_ratio,
            rep.peak_r,
            rep.last_r,
            rep.last_ratio,
            rep.drop(),
            rep.profile.samples.len()
        ),
    )
}

fn c9() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (tower, _) = no_limit_domain(&TowerSequenceSpec::parse("3,20,500")?)?;
    let domains = [
        ("disk", disk()),
        ("square", square()),
        ("ngon:7", regular_polygon(7)?),
        ("zero-entropy:12", zero_entropy_domain(12)?),
        ("no-limit:3,20,500", tower),
    ];
    let q = QuadratureSpec { rel_tol: 1e-9, lod_tol: 1e-9, ..Default::default() };
    let mut violations = 0usize;
    let mut parts = Vec::new();
    for (name, d) in &domains {
        let mut v = 0usize;
        let pick = |rng: &mut ChaCha8Rng| verify::sample_point(d, rng);
        for _ in 0..300 {
            let (p, a, b) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let pa = hilbert_distance(d, p, a)?;
            let ap = hilbert_distance(d, a, p)?;
            let pb = hilbert_distance(d, p, b)?;
            let ab = hilbert_distance(d, a, b)?;
            v += usize::from(pa < 0.0 || hilbert_distance(d, p, p)? != 0.0);
            v += usize::from((pa - ap).abs() > 1e-12 * (1.0 + pa));
            v += usize::from(pb > pa + ab + 1e-12 * (1.0 + pb));
            let s = rng.gen::<f64>();
            let m = p + (b - p) * s;
            let parts = hilbert_distance(d, p, m)? + hilbert_distance(d, m, b)?;
            v += usize::from((parts - pb).abs() > 1e-10 * (1.0 + pb));
            if d.is_polygonal() {
                let mat = Matrix::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
                if mat.det().abs() > 0.1 {
                    let img = d.linear_image(&mat)?;
                    let t = hilbert_distance(&img, mat.apply(p), mat.apply(b))?;
                    v += usize::from((t - pb).abs() > 1e-9 * (1.0 + pb));
                }
            }
        }
        let ctx = MeasureContext::new(d)?;
        let vol = ctx.ball_volume(1.0, &q)?.value;
        let mc = ctx.ball_volume_mc(1.0, &QuadratureSpec { mc_samples: 1_000_000, seed: 9, ..q })?;
        let sig = (vol - mc.value).abs() / mc.error_estimate;
        v += usize::from(sig > 3.0);
        let cuts = [0.0, 0.4, 1.9, PI, 4.4, TAU];
        let sum: f64 = cuts.windows(2).map(|w| ctx.sector_ball_volume(1.0, w[0], w[1], None, &q).map(|x| x.value)).sum::<Result<f64, Error>>()?;
        v += usize::from((sum - vol).abs() > 1e-8 * vol);
        violations += v;
        parts.push(format!("{name}: {v} (MC {sig:.2}σ)"));
    }
    outcome(violations == 0, format!("violations of metric axioms, additivity, invariance, MC agreement, sector sums: {}", parts.join(", ")))
}

fn profile_csv(threads: usize) -> Result<Vec<u8>, Error> {
    let out = Command::new(env!("CARGO_BIN_EXE_hilbert"))
        .args(["--domain", "builtin:zero-entropy:12", "--threads", &threads.to_string(), "profile", "--grid", "0.5:8:8", "--rel-tol", "1e-8"])
        .output()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    if !out.status.success() {
        return Err(Error::InvalidArgument(String::from_utf8_lossy(&out.stderr).into_owned()));
    }
    Ok(out.stdout)
}

fn c10() -> Result<Outcome, Error> {
    let (a, b) = (profile_csv(1)?, profile_csv(8)?);
    let rows = a.iter().filter(|&&c| c == b'\n').count();
    outcome(a == b && rows > 1, format!("`hilbert profile` CSV with --threads 1 vs 8: {} bytes, {rows} lines, identical: {}", a.len(), a == b))
}

#[test]
fn acceptance() {
    let results = [
        run(1, Some(Duration::from_secs(1)), c1),
        run(2, Some(Duration::from_secs(120)), c2),
        run(3, None, c3),
        run(4, None, c4),
        run(5, None, c5),
        run(6, None, c6),
        run(7, None, c7),
        run(8, Some(Duration::from_secs(600)), c8),
        run(9, None, c9),
        run(10, None, c10),
    ];
    let failed: Vec<usize> = (1..=10).filter(|k| !results[k - 1]).collect();
    println!("{} of 10 criteria pass", 10 - failed.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
