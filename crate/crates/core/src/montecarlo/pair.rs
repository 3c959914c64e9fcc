//! Binned estimates of the two-point correlation from simulated zeros.

use serde::{Deserialize, Serialize};

use super::{run_trials, trial_roots, ExperimentConfig};
use crate::kacrice::pair_correlation_closed;
use crate::quad::gauss_legendre_panels;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairBin {
    pub t_lo: f64,
    pub t_hi: f64,
    pub pairs: u64,
    pub estimate: f64,
    /// Poisson approximation `√max(pairs, 1) / normalization`.
    pub stderr: f64,
    /// Bin average of the limiting closed form.
    pub rho_closed: f64,
}

impl PairBin {
    pub fn t_mid(&self) -> f64 {
        0.5 * (self.t_lo + self.t_hi)
    }

    /// `|estimate - rho_closed| ≤ k · stderr`.
    pub fn within(&self, k: f64) -> bool {
        (self.estimate - self.rho_closed).abs() <= k * self.stderr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelationTable {
    pub window: (f64, f64),
    pub core_length: f64,
    pub trials: usize,
    pub bins: Vec<PairBin>,
}

impl PairCorrelationTable {
    pub fn fraction_within(&self, k: f64) -> f64 {
        self.bins.iter().filter(|b| b.within(k)).count() as f64 / self.bins.len() as f64
    }
}

/// Pair correlation estimated on the experiment window `R · supp h`.
pub fn empirical_pair_correlation(
    config: &ExperimentConfig,
    t_max: f64,
    bin_width: f64,
) -> Result<PairCorrelationTable> {
    pair_correlation_on_window(config, config.window(), t_max, bin_width)
}

/// Counts ordered pairs `x < y` with `y - x < t_max` whose left point lies in
/// the core `[a, b - t_max]`, so every counted pair lies inside the window and
/// no edge correction is needed. The estimate in a bin is
/// `pairs / (trials · core length · bin width)`.
pub fn pair_correlation_on_window(
    config: &ExperimentConfig,
    window: (f64, f64),
    t_max: f64,
    bin_width: f64,
) -> Result<PairCorrelationTable> {
    config.validate()?;
    if !(t_max > 0.0 && t_max <= 6.0) {
        return Err(Error::domain("t_max must lie in (0, 6]"));
    }
    if !(bin_width >= 0.02) || bin_width > t_max {
        return Err(Error::domain("bin_width must lie in [0.02, t_max]"));
    }
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite()) || b - a < 4.0 * t_max {
        return Err(Error::domain("window length must be at least 4·t_max"));
    }
    let nbins = (t_max / bin_width - 1e-9).ceil() as usize;
    let core_hi = b - t_max;
    let ensemble = config.ensemble.build()?;
    let per_trial = run_trials(config.trials, config.workers, |i| {
        let roots = trial_roots(&ensemble, config.seed, i, window, config.grid_step)?;
        let mut counts = vec![0u64; nbins];
        let r = &roots.roots;
        for (idx, x) in r.iter().enumerate() {
            if *x > core_hi {
                break;
            }
            for y in &r[idx + 1..] {
                let d = y - x;
                if d >= t_max {
                    break;
                }
                let bin = (d / bin_width) as usize;
                if bin < nbins {
                    counts[bin] += 1;
                }
            }
        }
        Ok(counts)
    })?;
    let mut totals = vec![0u64; nbins];
    for c in &per_trial {
        for (t, v) in totals.iter_mut().zip(c) {
            *t += v;
        }
    }
    let core_length = core_hi - a;
    let bins = totals
        .iter()
        .enumerate()
        .map(|(i, &pairs)| {
            let t_lo = i as f64 * bin_width;
            let t_hi = ((i + 1) as f64 * bin_width).min(t_max);
            let avg = gauss_legendre_panels(|t| pair_correlation_closed(t).value, t_lo, t_hi, 2, 16)
                / (t_hi - t_lo);
            let scale = config.trials as f64 * core_length * (t_hi - t_lo);
            PairBin {
                t_lo,
                t_hi,
                pairs,
                estimate: pairs as f64 / scale,
                stderr: (pairs.max(1) as f64).sqrt() / scale,
                rho_closed: avg,
            }
        })
        .collect();
    Ok(PairCorrelationTable {
        window,
        core_length,
        trials: config.trials,
        bins,
    })
}
