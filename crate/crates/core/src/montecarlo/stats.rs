//! Normality and trend tests used by the experiments.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::{Error, Result};

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// `P(sup |B| > λ)` for a Brownian bridge (Kolmogorov distribution tail).
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-transformed series converges fast for small λ.
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let s: f64 = (1..=20)
            .map(|k| {
                let j = (2 * k - 1) as f64;
                (-j * j * c).exp()
            })
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let kf = k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * kf * kf * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub pvalue: f64,
}

/// Sample mean and unbiased variance.
pub fn mean_variance(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    if x.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, 0.0);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Values standardized by their sample mean and standard deviation.
pub fn standardize(x: &[f64]) -> Result<Vec<f64>> {
    let (mean, var) = mean_variance(x);
    if x.len() < 2 || !(var > 0.0) {
        return Err(Error::Degenerate("sample variance is zero".into()));
    }
    let sd = var.sqrt();
    Ok(x.iter().map(|v| (v - mean) / sd).collect())
}

/// Kolmogorov–Smirnov test of `z` against `N(0,1)` with known parameters.
/// The p-value uses the asymptotic distribution with the usual small-sample
/// correction `λ = (√n + 0.12 + 0.11/√n) D`.
pub fn ks_standard_normal(z: &[f64]) -> Result<KsResult> {
    if z.is_empty() || z.iter().any(|v| v.is_nan()) {
        return Err(Error::domain("KS test needs a nonempty sample without NaN"));
    }
    let mut z = z.to_vec();
    z.sort_by(f64::total_cmp);
    let n = z.len() as f64;
    let mut d: f64 = 0.0;
    for (i, v) in z.iter().enumerate() {
        let f = normal_cdf(*v);
        d = d.max(((i + 1) as f64 / n - f).abs()).max((f - i as f64 / n).abs());
    }
    let sn = n.sqrt();
    let pvalue = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
    Ok(KsResult { statistic: d, pvalue })
}

/// Kolmogorov–Smirnov test of normality with mean and variance estimated
/// from the sample, which makes the p-value conservative.
///
/// Integer-valued samples (root counts) are compared with the normal law
/// discretized to the integers, `P(X ≤ k) = Φ((k + ½ - μ)/σ)` with the
/// Sheppard-corrected `σ² = s² - 1/12`; a continuous reference would be
/// rejected on lattice effects alone. Other samples are standardized and
/// passed to [`ks_standard_normal`].
pub fn ks_normality(samples: &[f64]) -> Result<KsResult> {
    if samples.iter().all(|v| v.fract() == 0.0 && v.abs() < 1e15) {
        return ks_lattice_normal(samples);
    }
    ks_standard_normal(&standardize(samples)?)
}

fn ks_lattice_normal(samples: &[f64]) -> Result<KsResult> {
    let (mean, var) = mean_variance(samples);
    if samples.len() < 2 || !(var > 0.0) {
        return Err(Error::Degenerate("sample variance is zero".into()));
    }
    let sd = (var - 1.0 / 12.0).max(var / 2.0).sqrt();
    let mut v: Vec<i64> = samples.iter().map(|x| *x as i64).collect();
    v.sort_unstable();
    let n = v.len() as f64;
    let (lo, hi) = (v[0], v[v.len() - 1]);
    let mut d: f64 = 0.0;
    let mut below = 0usize;
    for k in (lo - 1)..=hi {
        while below < v.len() && v[below] <= k {
            below += 1;
        }
        let reference = normal_cdf((k as f64 + 0.5 - mean) / sd);
        d = d.max((below as f64 / n - reference).abs());
    }
    // beyond the largest value the empirical CDF is 1
    d = d.max(1.0 - normal_cdf((hi as f64 + 0.5 - mean) / sd));
    let sn = n.sqrt();
    let pvalue = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
    Ok(KsResult { statistic: d, pvalue })
}

/// Kendall's tau between `x` and `y` and the one-sided p-value for a
/// positive trend. Exact (by enumeration of permutations) for up to eight
/// points, normal approximation beyond.
pub fn kendall_tau_increasing(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let m = x.len();
    if m != y.len() || m < 2 {
        return Err(Error::domain("Kendall tau needs two equal-length series of length ≥ 2"));
    }
    let score = |y: &[f64]| -> i64 {
        let mut s = 0i64;
        for i in 0..m {
            for j in i + 1..m {
                let a = (x[j] - x[i]).signum() * (y[j] - y[i]).signum();
                s += if a > 0.0 { 1 } else if a < 0.0 { -1 } else { 0 };
            }
        }
        s
    };
    let s = score(y);
    let pairs = (m * (m - 1) / 2) as f64;
    let tau = s as f64 / pairs;
    let p = if m <= 8 {
        let mut idx: Vec<usize> = (0..m).collect();
        let mut total = 0u64;
        let mut hits = 0u64;
        permute(&mut idx, 0, &mut |perm| {
            let yy: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
            total += 1;
            if score(&yy) >= s {
                hits += 1;
            }
        });
        hits as f64 / total as f64
    } else {
        let mf = m as f64;
        let var = mf * (mf - 1.0) * (2.0 * mf + 5.0) / 18.0;
        1.0 - normal_cdf((s as f64 - 1.0) / var.sqrt())
    };
    Ok((tau, p))
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}
