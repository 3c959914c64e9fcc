//! k-point correlation functions through the Kac–Rice formula.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use super::pair::abs_product_closed;
use super::{CorrelationMethod, CorrelationResult};
use crate::ensemble::{GaussianStream, KernelSource};
use crate::quad::gauss_legendre;
use crate::{Error, Result};

/// Largest condition number of the normalized covariance accepted.
pub const MAX_CONDITION: f64 = 1e12;
/// Default node budget for four-point correlations.
pub const DEFAULT_QMC_BUDGET: usize = 1 << 20;
const QMC_REPLICATES: usize = 16;
const QMC_SEED: u64 = 0x6b70_6f69_6e74;

/// `ρ_k(x₁,…,x_k)` for `2 ≤ k ≤ 4` distinct points.
///
/// The joint covariance `Γ` of values and derivatives is assembled for the
/// unit-variance rescaled process (same zeros, same correlations), the
/// derivatives are conditioned on all values vanishing, and
/// `E|η₁⋯η_k|` is evaluated: in closed form for `k = 2`, by nested
/// Gauss–Legendre quadrature for `k = 3` and by randomly shifted Halton points
/// with `budget` nodes for `k = 4`.
pub fn kpoint_correlation(
    points: &[f64],
    source: &KernelSource,
    budget: usize,
) -> Result<CorrelationResult> {
    let k = points.len();
    if !(2..=4).contains(&k) {
        return Err(Error::domain(format!("k-point correlation needs 2 ≤ k ≤ 4, got {k}")));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("points must be finite"));
    }
    for i in 0..k {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::domain("points must be pairwise distinct"));
            }
        }
    }
    let gamma = joint_covariance(points, source)?;
    // A degree-n polynomial spans only n + 1 dimensions, so Γ is singular by
    // construction when n + 1 < 2k; only the value block must then be regular.
    let dimension = match source {
        KernelSource::Finite(ens) => ens.degree() + 1,
        KernelSource::WeylSeries => usize::MAX,
    };
    if dimension < k {
        // more prescribed zeros than the degree allows
        return Ok(CorrelationResult {
            points: points.to_vec(),
            value: 0.0,
            method: CorrelationMethod::ClosedForm,
            stderr: 0.0,
        });
    }
    if dimension >= 2 * k {
        check_conditioning(&gamma, points)?;
    } else {
        check_conditioning(&gamma.view((0, 0), (k, k)).into_owned(), points)?;
    }

    let a = gamma.view((0, 0), (k, k)).into_owned();
    let b = gamma.view((0, k), (k, k)).into_owned();
    let d = gamma.view((k, k), (k, k)).into_owned();
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("value covariance not positive definite".into()))?;
    let det_a: f64 = chol.l().diagonal().iter().map(|v| v * v).product();
    let sigma = &d - b.transpose() * chol.solve(&b);
    let sigma = 0.5 * (&sigma + sigma.transpose());
    let density = (2.0 * PI).powf(-0.5 * k as f64) / det_a.sqrt();

    let (moment, stderr, method) = match k {
        2 => (
            abs_product_closed(sigma[(0, 0)], sigma[(1, 1)], sigma[(0, 1)]),
            0.0,
            CorrelationMethod::ClosedForm,
        ),
        3 => (abs_product_3(&sigma)?, 0.0, CorrelationMethod::Quadrature),
        _ => {
            let (m, se) = abs_product_qmc(&sigma, budget)?;
            (m, se, CorrelationMethod::QuasiMC)
        }
    };
    Ok(CorrelationResult {
        points: points.to_vec(),
        value: density * moment,
        method,
        stderr: density * stderr,
    })
}

/// Covariance of `(g(x₁),…,g(x_k), g'(x₁),…,g'(x_k))`.
fn joint_covariance(points: &[f64], source: &KernelSource) -> Result<DMatrix<f64>> {
    let k = points.len();
    let mut g = DMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in i..k {
            let c = source.normalized_cross(points[i], points[j])?;
            for (ci, row) in c.iter().enumerate() {
                for (cj, v) in row.iter().enumerate() {
                    let (r, s) = (ci * k + i, cj * k + j);
                    g[(r, s)] = *v;
                    g[(s, r)] = *v;
                }
            }
        }
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite covariance entry".into()));
    }
    Ok(g)
}

fn check_conditioning(gamma: &DMatrix<f64>, points: &[f64]) -> Result<()> {
    let n = gamma.nrows();
    let diag: Vec<f64> = (0..n).map(|i| gamma[(i, i)].max(0.0).sqrt()).collect();
    let corr = DMatrix::from_fn(n, n, |i, j| {
        let s = diag[i] * diag[j];
        if s > 0.0 {
            gamma[(i, j)] / s
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(corr).eigenvalues;
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition < MAX_CONDITION && diag.iter().all(|d| *d > 0.0) {
        return Ok(());
    }
    let mut pair = (points[0], points[1]);
    for i in 0..points.len() {
        for j in 0..i {
            if (points[i] - points[j]).abs() < (pair.0 - pair.1).abs() {
                pair = (points[j], points[i]);
            }
        }
    }
    Err(Error::Conditioning { pair, condition })
}

fn folded_mean(mu: f64, sd: f64) -> f64 {
    if sd <= 1e-300 {
        return mu.abs();
    }
    let z = mu / sd;
    sd * (2.0 / PI).sqrt() * (-0.5 * z * z).exp() + mu * statrs::function::erf::erf(z / std::f64::consts::SQRT_2)
}

fn normal_pdf(x: f64, sd: f64) -> f64 {
    (-0.5 * (x / sd).powi(2)).exp() / (sd * (2.0 * PI).sqrt())
}

/// Composite Gauss–Legendre over `[lo, hi]` split at `0` when it is inside.
fn split_panels(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const PANELS: usize = 8;
    let rule = gauss_legendre(20);
    let mut run = |a: f64, b: f64| {
        let h = (b - a) / PANELS as f64;
        let mut s = 0.0;
        for p in 0..PANELS {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in rule.0.iter().zip(&rule.1) {
                s += w * 0.5 * h * f(mid + 0.5 * h * x);
            }
        }
        s
    };
    if lo < 0.0 && hi > 0.0 {
        run(lo, 0.0) + run(0.0, hi)
    } else {
        run(lo, hi)
    }
}

/// `E|XY|` for `(X, Y) ~ N(m, S)`.
fn abs_product_shifted(m1: f64, m2: f64, s11: f64, s22: f64, s12: f64) -> f64 {
    if s11 <= 1e-300 {
        return m1.abs() * folded_mean(m2, s22.max(0.0).sqrt());
    }
    let sd1 = s11.sqrt();
    let beta = s12 / s11;
    let cond_sd = (s22 - beta * s12).max(0.0).sqrt();
    let mut f = |x: f64| {
        x.abs() * normal_pdf(x - m1, sd1) * folded_mean(m2 + beta * (x - m1), cond_sd)
    };
    split_panels(&mut f, m1 - 12.0 * sd1, m1 + 12.0 * sd1)
}

/// `E|η₁η₂η₃|` by conditioning on the coordinate with the largest variance.
fn abs_product_3(sigma: &DMatrix<f64>) -> Result<f64> {
    let c = (0..3)
        .max_by(|&i, &j| sigma[(i, i)].total_cmp(&sigma[(j, j)]))
        .expect("three coordinates");
    let (i, j) = match c {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let s33 = sigma[(c, c)];
    if !(s33 > 0.0) {
        return Ok(0.0);
    }
    let (mu1, mu2) = (sigma[(i, c)] / s33, sigma[(j, c)] / s33);
    let s11 = sigma[(i, i)] - mu1 * sigma[(i, c)];
    let s22 = sigma[(j, j)] - mu2 * sigma[(j, c)];
    let s12 = sigma[(i, j)] - mu1 * sigma[(j, c)];
    if s11 < -1e-10 * sigma[(i, i)].abs() || s22 < -1e-10 * sigma[(j, j)].abs() {
        return Err(Error::Numerical("conditional covariance not positive semidefinite".into()));
    }
    let sd = s33.sqrt();
    // The integrand is even in z, so integrate the half line and double.
    let mut f = |z: f64| {
        z * normal_pdf(z, sd) * abs_product_shifted(mu1 * z, mu2 * z, s11.max(0.0), s22.max(0.0), s12)
    };
    Ok(2.0 * split_panels(&mut f, 0.0, 12.0 * sd))
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// `E|∏ η_i|` by randomly shifted Halton points; returns mean and standard
/// error over independent shifts.
fn abs_product_qmc(sigma: &DMatrix<f64>, budget: usize) -> Result<(f64, f64)> {
    let dim = sigma.nrows();
    if budget < QMC_REPLICATES * 16 {
        return Err(Error::domain(format!(
            "quasi-Monte Carlo budget must be at least {}",
            QMC_REPLICATES * 16
        )));
    }
    let eig = SymmetricEigen::new(sigma.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if eig.eigenvalues.iter().any(|v| *v < -1e-10 * scale) {
        return Err(Error::Numerical("conditional covariance not positive semidefinite".into()));
    }
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    const BASES: [u64; 4] = [2, 3, 5, 7];
    let per = budget / QMC_REPLICATES;
    let mut shifts = GaussianStream::new(QMC_SEED, 0);
    let mut estimates = Vec::with_capacity(QMC_REPLICATES);
    let mut z = vec![0.0; dim];
    for _ in 0..QMC_REPLICATES {
        let shift: Vec<f64> = (0..dim).map(|_| shifts.next_uniform()).collect();
        let mut sum = 0.0;
        for idx in 1..=per as u64 {
            for (d, zd) in z.iter_mut().enumerate() {
                let mut u = radical_inverse(idx, BASES[d]) + shift[d];
                if u >= 1.0 {
                    u -= 1.0;
                }
                let u = u.clamp(1e-300, 1.0 - f64::EPSILON / 2.0);
                *zd = crate::ensemble::inverse_normal_cdf(u);
            }
            let mut prod = 1.0;
            for r in 0..dim {
                let mut eta = 0.0;
                for (c, zc) in z.iter().enumerate() {
                    eta += root[(r, c)] * zc;
                }
                prod *= eta.abs();
            }
            sum += prod;
        }
        estimates.push(sum / per as f64);
    }
    let m = estimates.iter().sum::<f64>() / QMC_REPLICATES as f64;
    let var = estimates.iter().map(|e| (e - m).powi(2)).sum::<f64>() / (QMC_REPLICATES - 1) as f64;
    Ok((m, (var / QMC_REPLICATES as f64).sqrt()))
}
