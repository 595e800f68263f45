//! Entropy profiles `R ↦ ln μ(B(0,R))/R` and the two experiments built on them.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{no_limit_domain, radii_schedules, zero_entropy_domain, ConstructionReport, TowerSequenceSpec};
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::measure::{MeasureContext, QuadratureSpec};

/// Log-spaced radii per decade used by the oscillation experiment.
pub const DEFAULT_PER_DECADE: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    #[serde(rename = "R")]
    pub r: f64,
    pub mu: f64,
    pub ratio: f64,
    pub error_estimate: f64,
}

/// A radius whose volume could not be computed within budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileFailure {
    #[serde(rename = "R")]
    pub r: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub samples: Vec<ProfileSample>,
    pub schedule_label: String,
    pub failures: Vec<ProfileFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub upper_window: f64,
    pub lower_window: f64,
    pub window: usize,
}

impl EntropyProfile {
    /// `R,mu,ratio,err` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("R,mu,ratio,err\n");
        for p in &self.samples {
            let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e}", p.r, p.mu, p.ratio, p.error_estimate);
        }
        s
    }

    /// Sample with the largest ratio.
    pub fn peak(&self) -> Option<&ProfileSample> {
        self.samples.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio))
    }

    pub fn ratio_at(&self, r: f64) -> Option<f64> {
        self.samples.iter().find(|p| (p.r - r).abs() <= 1e-12 * r).map(|p| p.ratio)
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("no radii given".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("radii must be positive and finite".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    Ok(())
}

/// One `ball_volume` per radius, evaluated in parallel and kept in radius order.
pub fn entropy_profile(domain: &ConvexDomain<f64>, radii: &[f64], q: &QuadratureSpec) -> Result<EntropyProfile> {
    profile_with(&MeasureContext::new(domain)?, radii, q, "custom")
}

fn profile_with(ctx: &MeasureContext, radii: &[f64], q: &QuadratureSpec, label: &str) -> Result<EntropyProfile> {
    check_radii(radii)?;
    q.validate()?;
    let results: Vec<_> = radii.par_iter().map(|&r| (r, ctx.ball_volume(r, q))).collect();
    let mut samples = Vec::with_capacity(radii.len());
    let mut failures = Vec::new();
    for (r, res) in results {
        match res {
            Ok(m) => samples.push(ProfileSample { r, mu: m.value, ratio: m.value.ln() / r, error_estimate: m.error_estimate }),
            Err(Error::BudgetExceeded(message)) => failures.push(ProfileFailure { r, message }),
            Err(e) => return Err(e),
        }
    }
    Ok(EntropyProfile { samples, schedule_label: label.to_string(), failures })
}

/// Max and min ratio over the last `window` samples.
pub fn entropy_estimate(profile: &EntropyProfile, window: usize) -> Result<EntropyEstimate> {
    let n = profile.samples.len();
    if n == 0 {
        return Err(Error::EmptyProfile);
    }
    if window == 0 || window > n {
        return Err(Error::InvalidArgument(format!("window {window} outside 1..={n}")));
    }
    let tail = &profile.samples[n - window..];
    let upper_window = tail.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    let lower_window = tail.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    Ok(EntropyEstimate { upper_window, lower_window, window })
}

/// `per_decade` log-spaced points on `[lo, hi]`, both ends included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    if !(lo > 0.0 && hi >= lo) || per_decade == 0 {
        return Vec::new();
    }
    let steps = ((hi / lo).log10() * per_decade as f64).ceil().max(1.0) as usize;
    let ratio = (hi / lo).ln() / steps as f64;
    let mut g: Vec<f64> = (0..steps).map(|k| lo * (k as f64 * ratio).exp()).collect();
    g.push(hi);
    g
}

fn merge_radii(mut r: Vec<f64>) -> Vec<f64> {
    r.sort_by(f64::total_cmp);
    r.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * *b);
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct OscillationReport {
    pub construction: ConstructionReport,
    /// `r_k = ln n_k` inside the sampled range.
    pub schedule_radii: Vec<f64>,
    pub profile: EntropyProfile,
    pub peak_r: f64,
    pub peak_ratio: f64,
    pub last_r: f64,
    pub last_ratio: f64,
}

impl OscillationReport {
    pub fn drop(&self) -> f64 {
        self.peak_ratio - self.last_ratio
    }
}

/// Profile of the no-limit domain on a log grid over `[0.5, min(30, R_1)]`
/// merged with the circle-like radii `r_k`.
pub fn oscillation_experiment(spec: &TowerSequenceSpec, q: &QuadratureSpec, per_decade: usize) -> Result<OscillationReport> {
    let (domain, construction) = no_limit_domain(spec)?;
    let (small, big) = radii_schedules(spec)?;
    let hi = big.get(1).copied().unwrap_or(f64::INFINITY).min(30.0);
    let lo = 0.5f64.min(hi);
    let schedule_radii: Vec<f64> = small.into_iter().filter(|r| *r >= lo && *r <= hi).collect();
    let mut radii = log_grid(lo, hi, per_decade);
    radii.extend_from_slice(&schedule_radii);
    let radii = merge_radii(radii);
    let ctx = MeasureContext::new(&domain)?;
    let profile = profile_with(&ctx, &radii, q, &format!("log{per_decade}+ln(n_k)"))?;
    let peak = *profile.peak().ok_or(Error::EmptyProfile)?;
    let last = *profile.samples.last().ok_or(Error::EmptyProfile)?;
    Ok(OscillationReport { construction, schedule_radii, profile, peak_r: peak.r, peak_ratio: peak.ratio, last_r: last.r, last_ratio: last.ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicSample {
    #[serde(rename = "R")]
    pub r: f64,
    pub mu: f64,
    pub error_estimate: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CubicReport {
    pub n: u32,
    /// Euclidean area of `B(0, 1)`.
    pub unit_ball_lebesgue: f64,
    pub tau: f64,
    /// `144π + τ`
    pub coefficient: f64,
    pub samples: Vec<CubicSample>,
    pub failures: Vec<ProfileFailure>,
}

impl CubicReport {
    pub fn all_within(&self) -> bool {
        self.samples.iter().all(|s| s.mu <= s.bound)
    }

    /// Whether `ln μ / R` strictly decreases over the samples in `[lo, hi]`.
    pub fn decreasing_on(&self, lo: f64, hi: f64) -> bool {
        let r: Vec<f64> = self.samples.iter().filter(|s| s.r >= lo && s.r <= hi).map(|s| s.ratio).collect();
        r.windows(2).all(|w| w[1] < w[0])
    }
}

/// Checks `μ(B(0,R)) ≤ (144π + τ)R³` on the zero-entropy domain with
/// `τ = π / (4·Leb(B(0,1)))`.
pub fn cubic_growth_check(n: u32, radii: &[f64], q: &QuadratureSpec) -> Result<CubicReport> {
    check_radii(radii)?;
    let domain = zero_entropy_domain(n)?;
    let ctx = MeasureContext::new(&domain)?;
    let unit_ball_lebesgue = ctx.lebesgue_ball_area(1.0, q)?.value;
    let tau = PI / (4.0 * unit_ball_lebesgue);
    let coefficient = 144.0 * PI + tau;
    let profile = profile_with(&ctx, radii, q, "cubic")?;
    let samples = profile
        .samples
        .iter()
        .map(|p| CubicSample { r: p.r, mu: p.mu, error_estimate: p.error_estimate, bound: coefficient * p.r.powi(3), ratio: p.ratio })
        .collect();
    Ok(CubicReport { n, unit_ball_lebesgue, tau, coefficient, samples, failures: profile.failures })
}
