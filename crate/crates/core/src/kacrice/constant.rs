//! The variance constant `K` and predicted variances of linear statistics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::pair::pair_value;
use crate::quad::{integrate, Tolerance};
use crate::rootcount::TestFunction;
use crate::{Error, Result};

/// Beyond this separation the clustering function is below `1e-15`.
const EFFECTIVE_SUPPORT: f64 = 12.0;
const KERNEL_BREAKS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// `k(t) = ρ(0,t) - 1/π²` for the limiting Weyl process.
pub fn clustering_function(t: f64) -> f64 {
    pair_value(t) - 1.0 / (PI * PI)
}

/// Outcome of [`constant_k`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KConstant {
    pub value: f64,
    /// Error estimate of the truncated quadrature.
    pub quadrature_error: f64,
    /// Rigorous bound on the neglected tail `|2∫_{cutoff}^∞ k|`.
    pub tail_bound: f64,
}

/// `K = 1/π + ∫_ℝ k(t) dt`, integrating `2∫₀^{cutoff} k` and bounding the
/// tail with the envelope `|k(t)| ≤ e^{-t²/4}` (valid for `t ≥ 6`).
pub fn constant_k(tail_cutoff: f64, tol: f64) -> Result<KConstant> {
    if !(tail_cutoff >= 8.0) || !tail_cutoff.is_finite() {
        return Err(Error::domain("tail_cutoff must be finite and at least 8"));
    }
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::domain("tol must lie in (0, 1e-6]"));
    }
    let tail_bound = 2.0 * PI.sqrt() * erfc(0.5 * tail_cutoff);
    let budget = tol - tail_bound;
    if budget <= 0.0 {
        return Err(Error::Accuracy {
            message: format!("tail bound {tail_bound:e} exceeds tol {tol:e}"),
            partial: f64::NAN,
            error_estimate: tail_bound,
        });
    }
    let half = integrate(
        clustering_function,
        0.0,
        tail_cutoff,
        &KERNEL_BREAKS,
        Tolerance::absolute(0.25 * budget),
    )?;
    Ok(KConstant {
        value: 1.0 / PI + 2.0 * half.value,
        quadrature_error: 2.0 * half.error,
        tail_bound,
    })
}

/// `k̂(0) = ∫_ℝ k(t) dt` over the whole line (infinite-range quadrature).
pub fn k_hat_zero() -> Result<f64> {
    let half = integrate(
        clustering_function,
        0.0,
        f64::INFINITY,
        &KERNEL_BREAKS,
        Tolerance::absolute(1e-12),
    )?;
    Ok(2.0 * half.value)
}

/// `A(s) = ∫ h(u) h(u - s) du`.
fn autocorrelation(h: &TestFunction, s: f64) -> Result<f64> {
    let (lo, hi) = h.support();
    let (a, b) = (lo.max(lo + s), hi.min(hi + s));
    if a >= b {
        return Ok(0.0);
    }
    let mut breaks: Vec<f64> = h
        .breakpoints()
        .iter()
        .flat_map(|p| [*p, p + s])
        .chain([0.0, s])
        .filter(|p| *p > a && *p < b)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    Ok(integrate(|u| h.eval(u) * h.eval(u - s), a, b, &breaks, Tolerance::default())?.value)
}

/// Asymptotic variance of `Σ h(x/R)` over the zeros of the limiting Weyl
/// process: `(R/π)∫h² + ∬ h(x/R) h(y/R) k(x-y) dx dy`, evaluated as
/// `R A(0)/π + 2R∫₀^∞ k(τ) A(τ/R) dτ` with the autocorrelation `A` of `h`.
pub fn predicted_variance(h: &TestFunction, scale: f64) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain("scale R must be positive and finite"));
    }
    if h.is_zero() {
        return Ok(0.0);
    }
    let (lo, hi) = h.support();
    let reach = EFFECTIVE_SUPPORT.min(scale * (hi - lo));
    let bp = h.breakpoints();
    let mut breaks: Vec<f64> = bp
        .iter()
        .flat_map(|p| bp.iter().map(move |q| scale * (p - q)))
        .chain(KERNEL_BREAKS)
        .filter(|t| *t > 0.0 && *t < reach)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut failure = None;
    let cross = integrate(
        |t| match autocorrelation(h, t / scale) {
            Ok(a) => clustering_function(t) * a,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        reach,
        &breaks,
        Tolerance { abs: 1e-11, rel: 1e-12, max_evaluations: 200_000 },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let diag = autocorrelation(h, 0.0)?;
    Ok(scale * (diag / PI + 2.0 * cross.value))
}
