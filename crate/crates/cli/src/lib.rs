//! `hilbert` command line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hilbert_core::constructions::{self, TowerSequenceSpec};
use hilbert_core::entropy::{self, DEFAULT_PER_DECADE};
use hilbert_core::geometry::io;
use hilbert_core::measure::{MeasureContext, QuadratureSpec};
use hilbert_core::{metric, Domain, Error, Point, Vector};

mod svg;
pub mod verify;

#[derive(Parser, Debug)]
#[command(name = "hilbert", version, about = "Hilbert metric geometry on planar convex domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Domain file (JSON) or `builtin:NAME` with NAME one of disk, square,
    /// ngon:<n>, no-limit[:<spec>], zero-entropy[:<N>].
    #[arg(long, global = true)]
    domain: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Quad {
    /// Target relative error of volume quadrature.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Merge tolerance for unit balls of many-vertex polygons (0 = exact).
    #[arg(long)]
    lod_tol: Option<f64>,
    #[arg(long)]
    max_evals: Option<u64>,
    #[arg(long, default_value_t = 8)]
    radial_order: usize,
}

impl Quad {
    fn spec(&self, seed: u64, rel: f64, lod: f64) -> QuadratureSpec {
        let d = QuadratureSpec::default();
        QuadratureSpec {
            radial_order: self.radial_order,
            seed,
            rel_tol: self.rel_tol.unwrap_or(rel),
            lod_tol: self.lod_tol.unwrap_or(lod),
            max_evals: self.max_evals.unwrap_or(d.max_evals),
            ..d
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a domain as JSON (with its construction report).
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Vertex count for ngon.
        #[arg(long)]
        n: Option<usize>,
        /// Number of accumulating points for zero-entropy.
        #[arg(long = "N")]
        big_n: Option<u32>,
        /// Tower spec for no-limit: tower, tower:<n0>, squaring:<n0> or a list 3,20,500.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Hilbert distance between two points.
    Dist {
        #[arg(long, value_parser = parse_point)]
        p: Point,
        #[arg(long, value_parser = parse_point)]
        q: Point,
    },
    /// Finsler norm F(p, v).
    Finsler {
        #[arg(long, value_parser = parse_point)]
        p: Point,
        #[arg(long, value_parser = parse_point)]
        v: Vector,
    },
    /// Tangent unit ball at p.
    UnitBall {
        #[arg(long, value_parser = parse_point)]
        p: Point,
    },
    /// Busemann volume of B(0, R).
    BallVol {
        #[arg(long = "R")]
        r: f64,
        /// Use Monte Carlo with this many samples instead of quadrature.
        #[arg(long)]
        mc: Option<u64>,
        #[command(flatten)]
        quad: Quad,
    },
    /// Entropy profile ln μ(B(0,R))/R.
    Profile {
        /// Comma-separated increasing radii.
        #[arg(long, value_delimiter = ',', conflicts_with = "grid")]
        radii: Option<Vec<f64>>,
        /// Log grid `lo:hi:per_decade`.
        #[arg(long)]
        grid: Option<String>,
        /// Trailing window for the limsup/liminf estimate (JSON output).
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[command(flatten)]
        quad: Quad,
    },
    /// Profile of the no-limit tower domain.
    Oscillation {
        #[arg(long, default_value = "tower")]
        spec: String,
        #[arg(long, default_value_t = DEFAULT_PER_DECADE)]
        per_decade: usize,
        #[command(flatten)]
        quad: Quad,
    },
    /// Cubic growth bound on the zero-entropy domain.
    Cubic {
        #[arg(long = "N", default_value_t = 30)]
        big_n: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10,11,12,13,14,15")]
        radii: Vec<f64>,
        #[command(flatten)]
        quad: Quad,
    },
    /// Check the comparison, square, volume and lemma inequalities.
    Verify {
        /// Random points per pointwise check.
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        /// Configurations per volume check.
        #[arg(long, default_value_t = 100)]
        configs: usize,
    },
    /// Render domain, metric sphere and a tangent unit ball as SVG.
    Svg {
        #[arg(long = "R", default_value_t = 2.0)]
        r: f64,
        #[arg(long, value_parser = parse_point, default_value = "0.3,0.2")]
        p: Point,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Drawing scale of the unit ball around p.
        #[arg(long, default_value_t = 0.25)]
        ball_scale: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Disk,
    Square,
    Ngon,
    NoLimit,
    ZeroEntropy,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let f = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Vector::new(f(a)?, f(b)?))
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::BudgetExceeded(_)) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

/// Resolves `builtin:NAME` or a JSON file path.
pub fn load_domain(arg: &str) -> Result<Domain, Error> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin(name);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::InvalidDomain(format!("{arg}: {e}")))?;
    io::from_json(&text)
}

fn builtin(name: &str) -> Result<Domain, Error> {
    let (head, tail) = name.split_once(':').map_or((name, None), |(h, t)| (h, Some(t)));
    let bad = || Error::InvalidDomain(format!("unknown builtin domain {name:?}"));
    match (head, tail) {
        ("disk", None) => Ok(constructions::disk()),
        ("square", None) => Ok(constructions::square()),
        ("ngon", Some(n)) => constructions::regular_polygon(n.parse().map_err(|_| bad())?),
        ("no-limit", t) => Ok(constructions::no_limit_domain(&TowerSequenceSpec::parse(t.unwrap_or("tower"))?)?.0),
        ("zero-entropy", t) => constructions::zero_entropy_domain(t.map_or(Ok(30), |n| n.parse()).map_err(|_| bad())?),
        _ => Err(bad()),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn domain(cli: &Cli) -> Result<Domain, Failure> {
    let arg = cli.domain.as_deref().ok_or_else(|| Error::InvalidArgument("--domain is required".into()))?;
    Ok(load_domain(arg)?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let json = cli.format == Some(Format::Json);
    match &cli.command {
        Command::Gen { kind, n, big_n, spec } => {
            let (d, report) = match kind {
                GenKind::Disk => (constructions::disk(), None),
                GenKind::Square => (constructions::square(), None),
                GenKind::Ngon => {
                    let n = n.ok_or_else(|| Error::InvalidArgument("ngon needs --n".into()))?;
                    (constructions::regular_polygon(n)?, None)
                }
                GenKind::NoLimit => {
                    let spec = TowerSequenceSpec::parse(spec.as_deref().unwrap_or("tower"))?;
                    let (d, r) = constructions::no_limit_domain(&spec)?;
                    (d, Some(serde_json::to_value(r).expect("json")))
                }
                GenKind::ZeroEntropy => (constructions::zero_entropy_domain(big_n.unwrap_or(30))?, None),
            };
            let mut v = io::to_value(&d);
            if let Some(r) = report {
                v["report"] = r;
            }
            emit(cli, &format!("{}\n", serde_json::to_string(&v).expect("json")))?;
        }
        Command::Dist { p, q } => {
            let d = metric::hilbert_distance(&domain(cli)?, *p, *q)?;
            emit(cli, &if json { pretty(&json!({ "distance": d })) } else { format!("{}\n", num(d)) })?;
        }
        Command::Finsler { p, v } => {
            let f = metric::finsler_norm(&domain(cli)?, *p, *v)?;
            emit(cli, &if json { pretty(&json!({ "finsler": f })) } else { format!("{}\n", num(f)) })?;
        }
        Command::UnitBall { p } => {
            let ctx = MeasureContext::new(&domain(cli)?)?;
            let text = if ctx.domain().is_polygonal() {
                let ub = ctx.unit_ball(*p)?;
                if cli.format == Some(Format::Csv) {
                    let mut s = String::from("x,y\n");
                    for v in &ub.vertices {
                        let _ = writeln!(s, "{},{}", num(v.x), num(v.y));
                    }
                    s
                } else {
                    let vs: Vec<[f64; 2]> = ub.vertices.iter().map(|v| [v.x, v.y]).collect();
                    pretty(&json!({ "area": ub.area, "vertices": vs }))
                }
            } else {
                let area = ctx.unit_ball_area(*p)?;
                pretty(&json!({ "area": area, "ellipse": true }))
            };
            emit(cli, &text)?;
        }
        Command::BallVol { r, mc, quad } => {
            let ctx = MeasureContext::new(&domain(cli)?)?;
            let mut q = quad.spec(cli.seed, 1e-9, 1e-9);
            let m = match mc {
                Some(n) => {
                    q.mc_samples = *n;
                    ctx.ball_volume_mc(*r, &q)?
                }
                None => ctx.ball_volume(*r, &q)?,
            };
            let text = if cli.format == Some(Format::Csv) {
                format!("R,mu,err\n{},{},{}\n", num(*r), num(m.value), num(m.error_estimate))
            } else if json {
                pretty(&serde_json::to_value(m).expect("json"))
            } else {
                format!("{} ± {:.3e}\n", num(m.value), m.error_estimate)
            };
            emit(cli, &text)?;
        }
        Command::Profile { radii, grid, window, quad } => {
            let d = domain(cli)?;
            let radii = match (radii, grid) {
                (Some(r), _) => r.clone(),
                (None, Some(g)) => {
                    let parts: Vec<&str> = g.split(':').collect();
                    let bad = || Error::InvalidArgument(format!("grid must be lo:hi:per_decade, got {g:?}"));
                    if parts.len() != 3 {
                        return Err(bad().into());
                    }
                    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
                    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
                    let per: usize = parts[2].parse().map_err(|_| bad())?;
                    entropy::log_grid(lo, hi, per)
                }
                (None, None) => return Err(Error::InvalidArgument("give --radii or --grid".into()).into()),
            };
            let q = quad.spec(cli.seed, 1e-6, 1e-6);
            let profile = entropy::entropy_profile(&d, &radii, &q)?;
            for f in &profile.failures {
                eprintln!("warning: R = {}: {}", f.r, f.message);
            }
            if json {
                let est = entropy::entropy_estimate(&profile, (*window).min(profile.samples.len())).ok();
                emit(cli, &pretty(&json!({ "profile": profile, "estimate": est })))?;
            } else {
                emit(cli, &profile.to_csv())?;
            }
            if !profile.failures.is_empty() {
                return Ok(2);
            }
        }
        Command::Oscillation { spec, per_decade, quad } => {
            let spec = TowerSequenceSpec::parse(spec)?;
            let q = quad.spec(cli.seed, 1e-4, 1e-4);
            let rep = entropy::oscillation_experiment(&spec, &q, *per_decade)?;
            if json {
                let mut v = serde_json::to_value(&rep).expect("json");
                v["drop"] = json!(rep.drop());
                emit(cli, &pretty(&v))?;
            } else {
                emit(cli, &rep.profile.to_csv())?;
                eprintln!(
                    "peak ratio {:.6} at R = {:.4}; ratio {:.6} at R = {:.4}; drop {:.6}",
                    rep.peak_ratio,
                    rep.peak_r,
                    rep.last_ratio,
                    rep.last_r,
                    rep.drop()
                );
            }
            if !rep.profile.failures.is_empty() {
                return Ok(2);
            }
        }
        Command::Cubic { big_n, radii, quad } => {
            let q = quad.spec(cli.seed, 1e-6, 1e-6);
            let rep = entropy::cubic_growth_check(*big_n, radii, &q)?;
            if json {
                emit(cli, &pretty(&serde_json::to_value(&rep).expect("json")))?;
            } else {
                let mut s = String::from("R,mu,err,bound,ratio\n");
                for x in &rep.samples {
                    let _ = writeln!(s, "{},{},{},{},{}", num(x.r), num(x.mu), num(x.error_estimate), num(x.bound), num(x.ratio));
                }
                emit(cli, &s)?;
                eprintln!("tau = {:.6}; bound holds: {}", rep.tau, rep.all_within());
            }
            if !rep.all_within() {
                return Ok(1);
            }
            if !rep.failures.is_empty() {
                return Ok(2);
            }
        }
        Command::Verify { points, configs } => {
            let d = domain(cli)?;
            let checks = verify::run_all(&d, cli.seed, *points, *configs)?;
            let text = if json { pretty(&serde_json::to_value(&checks).expect("json")) } else { checks.iter().map(|c| format!("{c}\n")).collect() };
            emit(cli, &text)?;
            if checks.iter().any(|c| c.status == verify::Status::Fail) {
                return Ok(1);
            }
        }
        Command::Svg { r, p, samples, ball_scale } => {
            let d = domain(cli)?;
            emit(cli, &svg::render(&d, *r, *p, *samples, *ball_scale)?)?;
        }
    }
    Ok(0)
}
