//! Busemann measure: tangent unit balls, density and metric-ball volumes.

pub(crate) mod boundary;
mod mc;
pub(crate) mod quadrature;
mod unit_ball;
mod volume;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{one_minus_norm_sq, outside, ConvexDomain, Point2, Vec2};
use boundary::Boundary;
use quadrature::{adaptive_1d, Rule, Tolerance};

pub use volume::MAX_RADIUS;

/// Quadrature and Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre points per direction in each cell.
    pub radial_order: usize,
    /// Extra dyadic splits of the angular direction before adaptation.
    pub angular_refinement: usize,
    pub mc_samples: u64,
    pub seed: u64,
    /// Target relative error of quadrature results.
    pub rel_tol: f64,
    /// Integrand evaluation cap per call.
    pub max_evals: u64,
    /// Relative chord error allowed when far boundary detail is merged in
    /// unit-ball computations on polygons with many vertices (0 = exact).
    pub lod_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { radial_order: 8, angular_refinement: 0, mc_samples: 1_000_000, seed: 0, rel_tol: 1e-9, max_evals: 10_000_000, lod_tol: 1e-9 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_order < 4 {
            return Err(Error::InvalidArgument("radial_order must be at least 4".into()));
        }
        if !(self.rel_tol > 0.0) || !(self.lod_tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub method: Method,
}

/// Tangent unit ball `{v : F(p, v) < 1}` of a polygonal domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitBallPolygon {
    pub vertices: Vec<Vec2<f64>>,
    pub area: f64,
}

/// A domain prepared for repeated measure computations.
#[derive(Debug, Clone)]
pub struct MeasureContext {
    domain: ConvexDomain<f64>,
    boundary: Option<Boundary>,
}

impl MeasureContext {
    pub fn new(domain: &ConvexDomain<f64>) -> Result<Self> {
        let boundary = match domain {
            ConvexDomain::UnitDisk => None,
            d => Some(Boundary::new(d)?),
        };
        Ok(Self { domain: domain.clone(), boundary })
    }

    pub fn domain(&self) -> &ConvexDomain<f64> {
        &self.domain
    }

    fn inside(&self, p: Point2<f64>) -> Result<()> {
        if self.domain.contains(p) {
            Ok(())
        } else {
            Err(outside(p))
        }
    }

    pub fn unit_ball(&self, p: Point2<f64>) -> Result<UnitBallPolygon> {
        self.inside(p)?;
        let b = self.boundary.as_ref().ok_or(Error::NotPolygonal)?;
        let mut vs = Vec::new();
        let area = unit_ball::area_at(b, &b.anchor(&self.domain, p), 0.0, Some(&mut vs));
        let scale = vs.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut vertices: Vec<Vec2<f64>> = Vec::with_capacity(vs.len());
        for v in vs {
            if vertices.last().is_none_or(|w: &Vec2<f64>| (v - *w).norm() > 1e-14 * scale) {
                vertices.push(v);
            }
        }
        while vertices.len() > 1 && (vertices[0] - vertices[vertices.len() - 1]).norm() <= 1e-14 * scale {
            vertices.pop();
        }
        Ok(UnitBallPolygon { vertices, area })
    }

    /// Area of the tangent unit ball at `p`: exact polygon area, or the ellipse
    /// area `π(1−|p|²)^{3/2}` for the disk.
    pub fn unit_ball_area(&self, p: Point2<f64>) -> Result<f64> {
        self.inside(p)?;
        Ok(match &self.boundary {
            Some(b) => unit_ball::area_at(b, &b.anchor(&self.domain, p), 0.0, None),
            None => PI * one_minus_norm_sq(p).powf(1.5),
        })
    }

    /// `π / area(B(p))`.
    pub fn busemann_density(&self, p: Point2<f64>) -> Result<f64> {
        self.unit_ball_area(p).map(|a| PI / a)
    }

    /// Density with level-of-detail merging, for integrators.
    pub(crate) fn density_fast(&self, p: Point2<f64>, lod_tol: f64) -> f64 {
        match &self.boundary {
            Some(b) => PI / unit_ball::area_at(b, &b.anchor(&self.domain, p), lod_tol, None),
            None => one_minus_norm_sq(p).powf(-1.5),
        }
    }

    /// `μ(B(0, r))` by quadrature.
    pub fn ball_volume(&self, r: f64, q: &QuadratureSpec) -> Result<MeasureResult> {
        q.validate()?;
        self.check_radius(r)?;
        let o = match &self.boundary {
            Some(b) => self.polygon_volume(b, r, None, q)?,
            None => self.polar_volume(r, 0.0, TAU, None, q)?,
        };
        Ok(MeasureResult { value: o.value, error_estimate: o.error, method: Method::Quadrature })
    }

    /// `μ(B(0, r) ∩ {θ_a ≤ θ ≤ θ_b})`, optionally also cut by the line through
    /// the two cap points (the part on the origin's side is kept).
    pub fn sector_ball_volume(
        &self,
        r: f64,
        theta_a: f64,
        theta_b: f64,
        cap: Option<(Point2<f64>, Point2<f64>)>,
        q: &QuadratureSpec,
    ) -> Result<MeasureResult> {
        q.validate()?;
        self.check_radius(r)?;
        let width = theta_b - theta_a;
        if !(width >= 0.0) || width > TAU * (1.0 + 1e-15) {
            return Err(Error::InvalidArgument(format!("sector width {width} outside [0, 2π]")));
        }
        if width == 0.0 {
            return Ok(MeasureResult { value: 0.0, error_estimate: 0.0, method: Method::Quadrature });
        }
        let o = match (&self.boundary, cap) {
            (_, Some(_)) | (None, None) => self.polar_volume(r, theta_a, theta_b, cap, q)?,
            (Some(b), None) if width >= TAU => self.polygon_volume(b, r, None, q)?,
            (Some(b), None) => self.polygon_volume(b, r, Some((theta_a, width)), q)?,
        };
        Ok(MeasureResult { value: o.value, error_estimate: o.error, method: Method::Quadrature })
    }

    /// Euclidean area of `B(0, r)`.
    pub fn lebesgue_ball_area(&self, r: f64, q: &QuadratureSpec) -> Result<MeasureResult> {
        q.validate()?;
        self.check_radius(r)?;
        let o = self.lebesgue_area(r, q)?;
        Ok(MeasureResult { value: o.value, error_estimate: o.error, method: Method::Quadrature })
    }

    /// Monte Carlo estimate of `μ(B(0, r))`.
    pub fn ball_volume_mc(&self, r: f64, q: &QuadratureSpec) -> Result<MeasureResult> {
        if q.mc_samples < 1000 {
            return Err(Error::InvalidArgument("mc_samples must be at least 1000".into()));
        }
        self.check_radius(r)?;
        let (value, err) = mc::ball_volume_mc(self, r, q.mc_samples, q.seed, q.lod_tol);
        Ok(MeasureResult { value, error_estimate: err, method: Method::MonteCarlo })
    }
}

pub fn unit_ball(domain: &ConvexDomain<f64>, p: Point2<f64>) -> Result<UnitBallPolygon> {
    if !domain.is_polygonal() {
        return Err(Error::NotPolygonal);
    }
    MeasureContext::new(domain)?.unit_ball(p)
}

pub fn unit_ball_area(domain: &ConvexDomain<f64>, p: Point2<f64>) -> Result<f64> {
    MeasureContext::new(domain)?.unit_ball_area(p)
}

pub fn busemann_density(domain: &ConvexDomain<f64>, p: Point2<f64>) -> Result<f64> {
    MeasureContext::new(domain)?.busemann_density(p)
}

pub fn ball_volume(domain: &ConvexDomain<f64>, r: f64, q: &QuadratureSpec) -> Result<MeasureResult> {
    MeasureContext::new(domain)?.ball_volume(r, q)
}

pub fn ball_volume_mc(domain: &ConvexDomain<f64>, r: f64, q: &QuadratureSpec) -> Result<MeasureResult> {
    MeasureContext::new(domain)?.ball_volume_mc(r, q)
}

pub fn sector_ball_volume(
    domain: &ConvexDomain<f64>,
    r: f64,
    theta_a: f64,
    theta_b: f64,
    cap: Option<(Point2<f64>, Point2<f64>)>,
    q: &QuadratureSpec,
) -> Result<MeasureResult> {
    MeasureContext::new(domain)?.sector_ball_volume(r, theta_a, theta_b, cap, q)
}

pub fn lebesgue_ball_area(domain: &ConvexDomain<f64>, r: f64, q: &QuadratureSpec) -> Result<MeasureResult> {
    MeasureContext::new(domain)?.lebesgue_ball_area(r, q)
}

/// Unit-ball area by angular quadrature of `½ F(p, u_θ)^{−2}`; works for any
/// domain and serves as a cross-check of the exact polygon construction.
pub fn unit_ball_area_quadrature(domain: &ConvexDomain<f64>, p: Point2<f64>, rel_tol: f64) -> Result<f64> {
    if !domain.contains(p) {
        return Err(outside(p));
    }
    let mut br = vec![0.0, TAU];
    for k in 0..domain.vertex_count().min(1 << 16) {
        let a = (domain.vertex(k) - p).angle();
        for x in [a, a + PI] {
            br.push(crate::scalar::wrap_angle(x));
        }
    }
    br.sort_by(f64::total_cmp);
    br.dedup_by(|x, y| *x - *y <= 1e-15);
    let intervals: Vec<(f64, f64)> = br.windows(2).map(|w| (w[0], w[1])).collect();
    let tol = Tolerance { rel: rel_tol, abs: 0.0, max_evals: 50_000_000 };
    let o = adaptive_1d(&Rule::new(8), &intervals, tol, |t| {
        let u = Vec2::polar(t);
        let f = 0.5 * (1.0 / domain.exit(p, u).t + 1.0 / domain.exit(p, -u).t);
        0.5 / (f * f)
    })?;
    Ok(o.value)
}
