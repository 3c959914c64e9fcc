//! Kac–Rice formulas: intensities, correlation functions, the variance
//! constant `K`, and independent numerical oracles for them.

mod constant;
mod gkz;
mod kpoint;
mod pair;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ensemble::{Family, KernelSource};
use crate::quad::{integrate, Integral, Tolerance};
use crate::{Error, Result};

pub use constant::{clustering_function, constant_k, k_hat_zero, predicted_variance, KConstant};
pub use gkz::{gkz_density_oracle, GKZ_MAX_DEGREE};
pub use kpoint::{kpoint_correlation, DEFAULT_QMC_BUDGET, MAX_CONDITION};
pub use pair::{
    conditional_root_covariance, expected_abs_product, pair_correlation_closed,
    pair_correlation_numeric, ConditionalCovariance,
};

/// How a correlation value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMethod {
    ClosedForm,
    Quadrature,
    QuasiMC,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub points: Vec<f64>,
    pub value: f64,
    pub method: CorrelationMethod,
    /// Zero for deterministic methods.
    pub stderr: f64,
}

/// Expected number of real zeros per unit length at `t`:
/// `√(ab - c²) / (π a)` with `a = K(t,t)`, `b = K_st(t,t)`, `c = K_s(t,t)`.
pub fn one_point_intensity(source: &KernelSource, t: f64) -> Result<f64> {
    let d = source.diagonal(t)?;
    if !(d.a > 0.0) {
        return Err(Error::Degenerate(format!("kernel vanishes at t = {t}")));
    }
    let disc = if d.disc < 0.0 {
        if d.disc < -1e-12 * d.a * d.b.abs() {
            return Err(Error::Numerical(format!(
                "negative discriminant {:e} at t = {t}",
                d.disc
            )));
        }
        0.0
    } else {
        d.disc
    };
    Ok(disc.sqrt() / (PI * d.a))
}

/// Points where the intensity changes character, used to seed quadrature:
/// the family's peaks plus a dyadic ladder so that wide windows cannot hide
/// them from the first Kronrod pass.
fn intensity_breaks(source: &KernelSource, reach: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    if let KernelSource::Finite(e) = source {
        let n = e.degree().max(1) as f64;
        match e.family() {
            Family::Kac => {
                for d in [1.0, 4.0, 16.0] {
                    pts.extend([1.0 - d / n, 1.0 + d / n].into_iter().filter(|p| *p > 0.0));
                }
            }
            Family::Kostlan => {}
            Family::Weyl => {
                let r = n.sqrt();
                pts.extend([r - 2.0, r, r + 2.0].into_iter().filter(|p| *p > 0.0));
            }
        }
    }
    let mut p = 1.0;
    while p <= reach.min(1e300) {
        pts.push(p);
        p *= 2.0;
    }
    let mut all: Vec<f64> = pts.iter().flat_map(|p| [*p, -*p]).collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

/// `E N(window) = ∫ ρ₁` by adaptive quadrature to absolute tolerance `1e-6`.
/// Infinite endpoints are accepted and handled by a change of variables.
pub fn expected_count_quadrature(source: &KernelSource, window: (f64, f64)) -> Result<Integral> {
    let (a, b) = window;
    if a.is_nan() || b.is_nan() || a > b {
        return Err(Error::domain(format!("invalid window [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if matches!(source, KernelSource::WeylSeries) && (a.is_infinite() || b.is_infinite()) {
        return Err(Error::domain("the limiting process has infinitely many zeros on an unbounded window"));
    }
    let reach = if a.is_finite() && b.is_finite() { a.abs().max(b.abs()) } else { 1.0 };
    let breaks: Vec<f64> = intensity_breaks(source, reach).into_iter().filter(|p| *p > a && *p < b).collect();
    let mut failure = None;
    let out = integrate(
        |t| match one_point_intensity(source, t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        &breaks,
        Tolerance { abs: 1e-6, rel: 0.0, max_evaluations: 1_000_000 },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
