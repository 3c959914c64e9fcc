//! Correlation densities of the Kac polynomial from the factorisation
//! `P(x) = ∏(x - w_i) · Q(x)`, integrating over the quotient coefficients.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::pair::expected_abs_product_with;
use crate::{Error, Result};

/// Largest degree accepted by [`gkz_density_oracle`].
pub const GKZ_MAX_DEGREE: usize = 6;

fn elementary_symmetric(w: &[f64]) -> Vec<f64> {
    let mut e = vec![1.0];
    for &x in w {
        let mut next = vec![0.0; e.len() + 1];
        for (m, v) in e.iter().enumerate() {
            next[m] += v;
            next[m + 1] += v * x;
        }
        e = next;
    }
    e
}

/// k-point correlation density (`k ≤ 2`) of the degree-`n` Kac polynomial at
/// `w`, from the substitution `ξ_i = Σ_j (-1)^{k-i+j} σ_{k-i+j}(w) t_j`.
///
/// The Gaussian integral over `t ∈ ℝ^{n-k+1}` reduces to an expectation of
/// `∏|Q(w_i)|` under a Gaussian law; for `k = 2` it is evaluated with an
/// angular Gauss–Legendre rule of `quadrature_nodes` points per arc, and the
/// result is rejected unless doubling the rule changes it by less than `1e-9`
/// (relative).
pub fn gkz_density_oracle(n: usize, w: &[f64], quadrature_nodes: usize) -> Result<f64> {
    let k = w.len();
    if !(1..=2).contains(&k) {
        return Err(Error::domain("GKZ oracle supports one or two points"));
    }
    if n < k || n > GKZ_MAX_DEGREE {
        return Err(Error::domain(format!("GKZ oracle needs {k} ≤ n ≤ {GKZ_MAX_DEGREE}")));
    }
    if w.iter().any(|x| !x.is_finite() || x.abs() > 0.5) {
        return Err(Error::domain("GKZ points must satisfy |w| ≤ 0.5"));
    }
    if quadrature_nodes < 2 {
        return Err(Error::domain("quadrature_nodes must be at least 2"));
    }
    let vandermonde: f64 = if k == 2 { (w[0] - w[1]).abs() } else { 1.0 };
    if vandermonde == 0.0 {
        return Ok(0.0);
    }
    let sigma = elementary_symmetric(w);
    // Coefficient of x^m in ∏(x - w_i) is (-1)^{k-m} σ_{k-m}.
    let monic: Vec<f64> = (0..=k)
        .map(|m| if (k - m) % 2 == 0 { sigma[k - m] } else { -sigma[k - m] })
        .collect();
    let d = n - k + 1;
    let l = DMatrix::from_fn(n + 1, d, |i, j| {
        if i >= j && i - j <= k {
            monic[i - j]
        } else {
            0.0
        }
    });
    let a = l.transpose() * &l;
    let chol = a
        .cholesky()
        .ok_or_else(|| Error::Numerical("quotient Gram matrix not positive definite".into()))?;
    let det: f64 = chol.l().diagonal().iter().map(|v| v * v).product();
    let v = DMatrix::from_fn(d, k, |j, i| w[i].powi(j as i32));
    let s = v.transpose() * chol.solve(&v);
    let moment = if k == 1 {
        (2.0 / PI).sqrt() * s[(0, 0)].max(0.0).sqrt()
    } else {
        let cov = [[s[(0, 0)], s[(0, 1)]], [s[(1, 0)], s[(1, 1)]]];
        let coarse = expected_abs_product_with(cov, quadrature_nodes)?;
        let fine = expected_abs_product_with(cov, 2 * quadrature_nodes)?;
        let err = (fine - coarse).abs();
        if err > 1e-9 * fine.abs() {
            return Err(Error::Accuracy {
                message: format!("{quadrature_nodes} angular nodes per arc are not enough"),
                partial: fine,
                error_estimate: err,
            });
        }
        fine
    };
    let gauss = (2.0 * PI).powf(-0.5 * (n + 1) as f64) * (2.0 * PI).powf(0.5 * d as f64) / det.sqrt();
    Ok(vandermonde * gauss * moment)
}
