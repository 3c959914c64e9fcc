//! Two-point correlation of the limiting Weyl process `K(s,t) = e^{st}`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{CorrelationMethod, CorrelationResult};
use crate::quad::gauss_legendre;
use crate::{Error, Result};

const PI2: f64 = PI * PI;

/// Covariance of the normalized derivatives at `0` and `t` given that the
/// process vanishes at both points: `Σ = I + [[x, y], [y, x]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalCovariance {
    pub t: f64,
    pub gamma: f64,
    pub x: f64,
    pub y: f64,
    pub sigma: [[f64; 2]; 2],
    /// `1 + x`, computed without cancellation.
    pub one_plus_x: f64,
    /// `1 - γ²`, computed without cancellation.
    pub one_minus_gamma_sq: f64,
}

/// `n(u) = 1 - e^{-u}(1+u)`.
fn n_fn(u: f64) -> f64 {
    if u > 1.0 {
        return 1.0 - (-u).exp() * (1.0 + u);
    }
    // Σ_{k≥2} (-1)^k (k-1) u^k / k!
    let mut term = -u; // (-u)^k / k! at k = 1
    let mut sum = 0.0;
    for k in 2..40 {
        term *= -u / k as f64;
        sum += term * (k - 1) as f64;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `m(u) = u - 1 + e^{-u}`.
fn m_fn(u: f64) -> f64 {
    if u > 1.0 {
        return u - 1.0 + (-u).exp();
    }
    let mut term = -u;
    let mut sum = 0.0;
    for k in 2..40 {
        term *= -u / k as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Taylor coefficients of `n(u) - e^{-u/2} m(u)` from `u³` upwards.
const D_SERIES: [f64; 21] = [
    0.08333333333333333,
    -0.0625,
    0.027083333333333334,
    -0.00859375,
    0.002176339285714286,
    -0.0004603794642857143,
    8.37914737654321e-05,
    -1.3405128761574073e-05,
    1.9161437821919592e-06,
    -2.4789110177293774e-07,
    2.9326417367595753e-08,
    -3.1995062806917577e-09,
    3.2415787501000975e-10,
    -3.0676613179553524e-11,
    2.7250358313663018e-12,
    -2.2817970428445753e-13,
    1.8075843073634045e-14,
    -1.3589765144124762e-15,
    9.723612177514986e-17,
    -6.637742705649352e-18,
    4.332637399839114e-19,
];

fn d_fn(u: f64) -> f64 {
    if u > 1.0 {
        return n_fn(u) - (-0.5 * u).exp() * m_fn(u);
    }
    u * u * u * D_SERIES.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

/// Conditional derivative covariance for the pair `(0, t)`, `t > 0`.
pub fn conditional_root_covariance(t: f64) -> Result<ConditionalCovariance> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "conditional covariance needs finite t > 0, got {t} (use ρ(0,t) = ρ(0,-t))"
        )));
    }
    let u = t * t;
    let gamma = (-0.5 * u).exp();
    let omg = -(-u).exp_m1();
    let one_plus_x = n_fn(u) / omg;
    let y = -gamma * m_fn(u) / omg;
    let x = if u > 1e-3 { -u * gamma * gamma / omg } else { one_plus_x - 1.0 };
    Ok(ConditionalCovariance {
        t,
        gamma,
        x,
        y,
        sigma: [[one_plus_x, y], [y, one_plus_x]],
        one_plus_x,
        one_minus_gamma_sq: omg,
    })
}

/// Density prefactor `1 / (2π √(1-γ²))` turning `E|X||Y|` into `ρ(0,t)`.
fn prefactor(c: &ConditionalCovariance) -> f64 {
    1.0 / (2.0 * PI * c.one_minus_gamma_sq.sqrt())
}

/// `ρ(0,t)` for the limiting Weyl process in closed form.
pub fn pair_correlation_closed(t: f64) -> CorrelationResult {
    let t = t.abs();
    let value = pair_value(t);
    CorrelationResult {
        points: vec![0.0, t],
        value,
        method: CorrelationMethod::ClosedForm,
        stderr: 0.0,
    }
}

pub(crate) fn pair_value(t: f64) -> f64 {
    let t = t.abs();
    if t.is_nan() {
        return f64::NAN;
    }
    if t == 0.0 {
        return 0.0;
    }
    if t < 1e-4 {
        return t / (4.0 * PI) - t * t * t / (48.0 * PI);
    }
    if t > 40.0 {
        return 1.0 / PI2;
    }
    let u = t * t;
    let g = (-0.5 * u).exp();
    let omg = -(-u).exp_m1();
    let n = n_fn(u);
    let gm = g * m_fn(u);
    let root = (d_fn(u) * (n + gm)).max(0.0).sqrt();
    (root + gm * gm.atan2(root)) / (PI2 * omg * omg.sqrt())
}

/// `E|X||Y|` for a centred bivariate Gaussian with covariance `sigma`.
///
/// After diagonalising `sigma`, `(X, Y) = r·(q₁(θ), q₂(θ))` in polar form and
/// `E|XY| = (1/π) ∫₀^{2π} |q₁ q₂| dθ`; the integrand is a trigonometric
/// polynomial between the four kink angles, so composite Gauss–Legendre on
/// each arc is accurate to rounding.
pub fn expected_abs_product(sigma: [[f64; 2]; 2]) -> Result<f64> {
    expected_abs_product_with(sigma, 24)
}

pub(crate) fn expected_abs_product_with(sigma: [[f64; 2]; 2], order: usize) -> Result<f64> {
    let (v, l) = psd_factor(sigma)?;
    // q_i(θ) = a_i cos θ + b_i sin θ
    let (a1, b1) = (v[(0, 0)] * l[0], v[(0, 1)] * l[1]);
    let (a2, b2) = (v[(1, 0)] * l[0], v[(1, 1)] * l[1]);
    let tau = 2.0 * PI;
    let mut cuts = vec![0.0, tau];
    for (a, b) in [(a1, b1), (a2, b2)] {
        if a != 0.0 || b != 0.0 {
            let th = (-a).atan2(b).rem_euclid(PI);
            cuts.push(th);
            cuts.push(th + PI);
        }
    }
    cuts.retain(|c| (0.0..=tau).contains(c));
    cuts.sort_by(f64::total_cmp);
    let rule = gauss_legendre(order);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, wt) in rule.0.iter().zip(&rule.1) {
            let th = mid + half * x;
            let (s, c) = th.sin_cos();
            total += wt * half * ((a1 * c + b1 * s) * (a2 * c + b2 * s)).abs();
        }
    }
    Ok(total / PI)
}

/// Eigen-decomposition of a 2×2 covariance with tiny negative eigenvalues
/// clamped; returns eigenvectors (columns) and square-root eigenvalues.
fn psd_factor(sigma: [[f64; 2]; 2]) -> Result<(Matrix2<f64>, [f64; 2])> {
    if sigma.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite covariance".into()));
    }
    let m = Matrix2::new(sigma[0][0], 0.5 * (sigma[0][1] + sigma[1][0]), 0.5 * (sigma[0][1] + sigma[1][0]), sigma[1][1]);
    let eig = SymmetricEigen::new(m);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut l = [0.0; 2];
    for (i, ev) in eig.eigenvalues.iter().enumerate() {
        if *ev < -1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "covariance not positive semidefinite (eigenvalue {ev:e})"
            )));
        }
        l[i] = ev.max(0.0).sqrt();
    }
    Ok((eig.eigenvectors, l))
}

/// `ρ(0,t)` by direct two-dimensional quadrature of `E|X||Y|`. Independent of
/// the single-integral reduction behind [`pair_correlation_closed`].
pub fn pair_correlation_numeric(t: f64) -> Result<CorrelationResult> {
    let t = t.abs();
    if !(t > 1e-3) {
        return Err(Error::domain("pair_correlation_numeric needs |t| > 1e-3"));
    }
    let c = conditional_root_covariance(t)?;
    let e = expected_abs_product(c.sigma)?;
    Ok(CorrelationResult {
        points: vec![0.0, t],
        value: prefactor(&c) * e,
        method: CorrelationMethod::Quadrature,
        stderr: 0.0,
    })
}

/// `E|XY|` in closed form (used for `k = 2` correlations).
pub(crate) fn abs_product_closed(s11: f64, s22: f64, s12: f64) -> f64 {
    let det = (s11 * s22 - s12 * s12).max(0.0);
    let norm = (s11 * s22).sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    let r = (s12 / norm).clamp(-1.0, 1.0);
    2.0 / PI * (det.sqrt() + s12 * r.asin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_match_direct_forms_near_switch() {
        for u in [0.999, 1.0, 1.001] {
            let nd = 1.0 - (-u as f64).exp() * (1.0 + u);
            let md = u - 1.0 + (-u as f64).exp();
            assert!((n_fn(u) - nd).abs() < 1e-15);
            assert!((m_fn(u) - md).abs() < 1e-15);
            let dd = nd - (-0.5 * u as f64).exp() * md;
            assert!((d_fn(u) - dd).abs() < 1e-14, "{u}");
        }
    }

    #[test]
    fn covariance_fields() {
        let c = conditional_root_covariance(1.0).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((c.x + e1 / (1.0 - e1)).abs() < 1e-14);
        assert!((c.one_plus_x - (1.0 + c.x)).abs() < 1e-14);
        assert!(conditional_root_covariance(0.0).is_err());
    }

    #[test]
    fn closed_abs_product_identity() {
        assert!((abs_product_closed(1.0, 1.0, 0.0) - 2.0 / PI).abs() < 1e-15);
        assert!((abs_product_closed(1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        let q = expected_abs_product([[2.0, 0.7], [0.7, 0.5]]).unwrap();
        assert!((q - abs_product_closed(2.0, 0.5, 0.7)).abs() < 1e-13);
    }

    #[test]
    fn closed_form_is_continuous_at_branch_points() {
        for t in [1e-4, 1.0, 40.0] {
            let below = pair_value(t * (1.0 - 1e-12));
            let above = pair_value(t * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-10 * below, "{t}: {below} {above}");
        }
    }
}
