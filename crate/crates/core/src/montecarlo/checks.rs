//! Empirical checks of the local law and of moment growth.

use serde::{Deserialize, Serialize};

use super::stats::kendall_tau_increasing;
use super::{run_trials, trial_roots, ExperimentConfig};
use crate::ensemble::EnsembleSpec;
use crate::rootcount::{bulk_half_width, linear_statistic, TestFunction, DEFAULT_GRID_STEP};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalLawTable {
    pub window: (f64, f64),
    pub subinterval_length: f64,
    /// Left endpoints of the subintervals.
    pub starts: Vec<f64>,
    /// Largest count seen in each subinterval over all trials.
    pub max_counts: Vec<usize>,
    pub overall_max: usize,
    /// Largest total count over the whole window.
    pub max_total: usize,
    /// `3ℓ/π`.
    pub threshold: f64,
    /// Fraction of (trial, subinterval) pairs whose count exceeds `threshold`.
    pub exceedance_fraction: f64,
}

/// Splits `[-√n - 5, √n + 5]` into consecutive pieces of length `ℓ` (the last
/// one possibly shorter) and records per-piece root counts across trials.
/// The `h` and `scale` fields of `config` are ignored.
pub fn local_law_check(config: &ExperimentConfig, subinterval_length: f64) -> Result<LocalLawTable> {
    config.validate()?;
    if !(subinterval_length >= 1.0) || !subinterval_length.is_finite() {
        return Err(Error::domain("subinterval_length must be at least 1"));
    }
    let w = bulk_half_width(config.ensemble.degree);
    let window = (-w, w);
    let pieces = ((2.0 * w) / subinterval_length - 1e-12).ceil().max(1.0) as usize;
    let starts: Vec<f64> = (0..pieces).map(|i| -w + i as f64 * subinterval_length).collect();
    let ensemble = config.ensemble.build()?;
    let per_trial = run_trials(config.trials, config.workers, |i| {
        let roots = trial_roots(&ensemble, config.seed, i, window, config.grid_step)?;
        let mut counts = vec![0usize; pieces];
        for x in &roots.roots {
            let k = (((x + w) / subinterval_length) as usize).min(pieces - 1);
            counts[k] += 1;
        }
        Ok(counts)
    })?;
    let threshold = 3.0 * subinterval_length / std::f64::consts::PI;
    let mut max_counts = vec![0usize; pieces];
    let mut exceed = 0usize;
    let mut max_total = 0usize;
    for counts in &per_trial {
        for (m, c) in max_counts.iter_mut().zip(counts) {
            *m = (*m).max(*c);
            if *c as f64 > threshold {
                exceed += 1;
            }
        }
        max_total = max_total.max(counts.iter().sum());
    }
    Ok(LocalLawTable {
        window,
        subinterval_length,
        starts,
        overall_max: max_counts.iter().copied().max().unwrap_or(0),
        max_counts,
        max_total,
        threshold,
        exceedance_fraction: exceed as f64 / (pieces * config.trials) as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentGrowthRow {
    pub scale: f64,
    pub degree: usize,
    /// `E[n(R,h)^k] / R^k` for `k = 1..=4`.
    pub ratios: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentGrowthTable {
    pub rows: Vec<MomentGrowthRow>,
    /// Kendall's tau of the ratio against `R`, per order.
    pub kendall_tau: [f64; 4],
    /// One-sided p-value for an increasing trend, per order.
    pub trend_pvalue: [f64; 4],
    /// No increasing trend at the 5% level, per order.
    pub bounded: [bool; 4],
}

/// Empirical `E[n(R,h)^k] / R^k` for each `R`, using the series-like Weyl
/// truncation for every scale.
pub fn moment_growth_check(
    h: &TestFunction,
    scales: &[f64],
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<MomentGrowthTable> {
    if scales.is_empty() || scales.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::domain("scales must be positive"));
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("scales must be strictly increasing"));
    }
    if *scales.last().expect("nonempty") > 60.0 {
        return Err(Error::domain("largest scale must not exceed 60"));
    }
    let mut rows = Vec::with_capacity(scales.len());
    for &r in scales {
        let spec = EnsembleSpec::series_like(r);
        let mut ratios = [0.0; 4];
        if !h.is_zero() {
            let config = ExperimentConfig::new(spec, h.clone(), r, trials, seed).with_workers(workers);
            config.validate()?;
            let ensemble = spec.build()?;
            let window = config.window();
            let stats = run_trials(trials, workers, |i| {
                let roots = trial_roots(&ensemble, seed, i, window, DEFAULT_GRID_STEP)?;
                linear_statistic(&roots, h, r)
            })?;
            for (k, ratio) in ratios.iter_mut().enumerate() {
                let m = stats.iter().map(|v| v.powi(k as i32 + 1)).sum::<f64>() / trials as f64;
                *ratio = m / r.powi(k as i32 + 1);
            }
        }
        rows.push(MomentGrowthRow { scale: r, degree: spec.degree, ratios });
    }
    let mut kendall_tau = [0.0; 4];
    let mut trend_pvalue = [1.0; 4];
    let mut bounded = [true; 4];
    if rows.len() >= 2 {
        for k in 0..4 {
            let y: Vec<f64> = rows.iter().map(|r| r.ratios[k]).collect();
            let (tau, p) = kendall_tau_increasing(scales, &y)?;
            kendall_tau[k] = tau;
            trend_pvalue[k] = p;
            bounded[k] = !(tau > 0.0 && p < 0.05);
        }
    }
    Ok(MomentGrowthTable { rows, kendall_tau, trend_pvalue, bounded })
}
