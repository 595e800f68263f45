//! Reference domains and the two special constructions: a ring polygon whose
//! volume entropy oscillates and a polygon accumulating at one point.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{inscribed_hull, ConvexDomain, Ring, Vec2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerRule {
    /// `n_{k+1} = 3^{n_k²}`
    PaperTower,
    /// `n_{k+1} = n_k²`
    Squaring,
    ExplicitList,
}

/// Ring sizes `n_0 < n_1 < …` of the oscillating construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerSequenceSpec {
    pub n0: u64,
    pub rule: TowerRule,
    #[serde(default)]
    pub explicit: Option<Vec<u64>>,
    pub max_rings: usize,
}

impl Default for TowerSequenceSpec {
    fn default() -> Self {
        Self { n0: 3, rule: TowerRule::PaperTower, explicit: None, max_rings: 8 }
    }
}

/// One term `n_k`, kept as `ln n_k` once it leaves the integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceTerm {
    pub exact: Option<u64>,
    pub value: f64,
    pub ln: f64,
}

impl SequenceTerm {
    fn from_u64(n: u64) -> Self {
        Self { exact: Some(n), value: n as f64, ln: (n as f64).ln() }
    }

    fn from_ln(ln: f64) -> Self {
        Self { exact: None, value: ln.exp(), ln }
    }

    /// `1/n`, possibly zero.
    fn recip(&self) -> f64 {
        (-self.ln).exp()
    }
}

impl TowerSequenceSpec {
    pub fn paper() -> Self {
        Self::default()
    }

    /// Parses `tower` (also `paper_tower`), `tower:<n0>`, `squaring:<n0>` or a comma
    /// list `3,20,500`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSequence(format!("cannot parse tower spec {s:?}"));
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let n0 = |t: &str| if t.is_empty() { Ok(3) } else { t.parse::<u64>().map_err(|_| bad()) };
        match head {
            "tower" | "paper" | "paper_tower" | "" => Ok(Self { n0: n0(tail)?, ..Self::default() }),
            "squaring" => Ok(Self { n0: n0(tail)?, rule: TowerRule::Squaring, ..Self::default() }),
            _ => {
                let list: Vec<u64> = s.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<_>>()?;
                let n0 = *list.first().ok_or_else(bad)?;
                Ok(Self { n0, rule: TowerRule::ExplicitList, max_rings: list.len(), explicit: Some(list) })
            }
        }
    }

    /// Terms `n_0, …` up to `max_rings` (or the explicit list length).
    pub fn sequence(&self) -> Result<Vec<SequenceTerm>> {
        if self.n0 < 3 {
            return Err(Error::InvalidSequence(format!("n0 must be at least 3, got {}", self.n0)));
        }
        if self.max_rings == 0 {
            return Err(Error::InvalidSequence("max_rings must be positive".into()));
        }
        let mut seq = vec![SequenceTerm::from_u64(self.n0)];
        match self.rule {
            TowerRule::ExplicitList => {
                let list = self.explicit.as_ref().ok_or_else(|| Error::InvalidSequence("explicit list missing".into()))?;
                if list.first() != Some(&self.n0) {
                    return Err(Error::InvalidSequence("explicit list must start with n0".into()));
                }
                seq = list.iter().take(self.max_rings).map(|&n| SequenceTerm::from_u64(n)).collect();
            }
            TowerRule::PaperTower | TowerRule::Squaring => {
                while seq.len() < self.max_rings {
                    let last = *seq.last().unwrap();
                    if last.ln.is_infinite() {
                        break;
                    }
                    let next = match (self.rule, last.exact) {
                        (TowerRule::Squaring, Some(n)) => n.checked_mul(n).map(SequenceTerm::from_u64),
                        (TowerRule::PaperTower, Some(n)) => {
                            n.checked_mul(n).and_then(|e| u32::try_from(e).ok()).and_then(|e| 3u64.checked_pow(e)).map(SequenceTerm::from_u64)
                        }
                        _ => None,
                    };
                    let next = next.unwrap_or_else(|| match self.rule {
                        TowerRule::Squaring => SequenceTerm::from_ln(2.0 * last.ln),
                        _ => SequenceTerm::from_ln(last.value * last.value * 3f64.ln()),
                    });
                    seq.push(next);
                }
            }
        }
        if seq.windows(2).any(|w| !(w[1].ln > w[0].ln)) {
            return Err(Error::InvalidSequence("sequence must be strictly increasing".into()));
        }
        let sum: f64 = seq.iter().map(|t| t.recip()).sum();
        if sum >= 0.5 {
            return Err(Error::InvalidSequence(format!("Σ 1/n_k = {sum} must be below 1/2")));
        }
        Ok(seq)
    }
}

/// Angle bookkeeping of the oscillating construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionReport {
    /// `θ_k = 2π Σ_{ℓ<k} 1/n_ℓ` for `k = 0..=K`.
    pub theta_k: Vec<f64>,
    pub theta_infinity: f64,
    /// Boundary points `n_k + 1` per ring, `None` when not representable.
    pub ring_vertex_counts: Vec<Option<u64>>,
    pub collapsed_rings: Vec<usize>,
    pub sequence: Vec<SequenceTerm>,
}

pub fn square() -> ConvexDomain<f64> {
    let v = |x, y| Vec2::new(x, y);
    ConvexDomain::from_vertices(vec![v(-1.0, -1.0), v(1.0, -1.0), v(1.0, 1.0), v(-1.0, 1.0)]).expect("square is valid")
}

pub fn disk<T: Scalar>() -> ConvexDomain<T> {
    ConvexDomain::UnitDisk
}

/// Regular `n`-gon inscribed in the unit circle with a vertex at angle 0.
pub fn regular_polygon(n: usize) -> Result<ConvexDomain<f64>> {
    if n < 3 {
        return Err(Error::BadArity(format!("regular polygon needs n ≥ 3, got {n}")));
    }
    ConvexDomain::from_angles((0..n).map(|j| TAU * j as f64 / n as f64).collect())
}

/// Ring polygon with ring `k` on `[θ_k, θ_{k+1}]` at step `2π/n_k²`, closure at
/// `θ_∞`, and antipodes. Rings whose step is below the dedup tolerance become arcs.
pub fn no_limit_domain(spec: &TowerSequenceSpec) -> Result<(ConvexDomain<f64>, ConstructionReport)> {
    let seq = spec.sequence()?;
    let tol = f64::dedup_tol();
    let mut theta = vec![0.0];
    let mut rings = Vec::new();
    let mut counts = Vec::new();
    let mut collapsed = Vec::new();
    for (k, t) in seq.iter().enumerate() {
        let alpha = TAU * t.recip();
        let start = theta[k];
        let step = TAU * (-2.0 * t.ln).exp();
        let count = t.exact.unwrap_or(u64::MAX);
        if step < tol {
            collapsed.push(k);
        }
        rings.push(Ring { start, step, count });
        counts.push(t.exact.and_then(|n| n.checked_add(1)));
        theta.push(start + alpha);
    }
    let theta_inf = *theta.last().unwrap();
    if !(theta_inf > 0.0 && theta_inf < PI) {
        return Err(Error::InvalidSequence(format!("θ_∞ = {theta_inf} outside (0, π)")));
    }
    let domain = ConvexDomain::from_rings(rings, vec![theta_inf])?;
    let report =
        ConstructionReport { theta_k: theta, theta_infinity: theta_inf, ring_vertex_counts: counts, collapsed_rings: collapsed, sequence: seq };
    Ok((domain, report))
}

/// Hull of `±(cos 2^{−n}, sin 2^{−n})` for `0 ≤ n ≤ N` and `(±1, 0)`, stored by angle.
pub fn zero_entropy_domain(n: u32) -> Result<ConvexDomain<f64>> {
    if !(1..=40).contains(&n) {
        return Err(Error::BadArity(format!("N must be in 1..=40, got {n}")));
    }
    let mut angles = vec![0.0, PI];
    for k in 0..=n {
        let a = 2f64.powi(-(k as i32));
        angles.push(a);
        angles.push(PI + a);
    }
    inscribed_hull(&angles)
}

/// `r_k = ln n_k` and `R_i = n_i` for every finite term.
pub fn radii_schedules(spec: &TowerSequenceSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let seq = spec.sequence()?;
    let r = seq.iter().map(|t| t.ln).filter(|x| x.is_finite()).collect();
    let big = seq.iter().map(|t| t.value).filter(|x| x.is_finite()).collect();
    Ok((r, big))
}
