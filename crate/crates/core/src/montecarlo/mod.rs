//! Seed-reproducible Monte Carlo experiments on real zeros.
//!
//! Every trial draws its coefficients from the stream `(seed, trial_index)`,
//! so results do not depend on how trials are scheduled across workers;
//! aggregation always runs in trial order.

mod checks;
mod pair;
mod stats;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, EnsembleSpec, RNG_ALGORITHM_ID};
use crate::partitions::empirical_cumulants;
use crate::rootcount::{linear_statistic, min_gap, real_roots, RootList, TestFunction, DEFAULT_GRID_STEP, DEFAULT_REFINEMENT_TOL};
use crate::{Error, Result};

pub use checks::{local_law_check, moment_growth_check, LocalLawTable, MomentGrowthRow, MomentGrowthTable};
pub use pair::{empirical_pair_correlation, pair_correlation_on_window, PairBin, PairCorrelationTable};
pub use stats::{
    kendall_tau_increasing, kolmogorov_tail, ks_normality, ks_standard_normal, mean_variance, normal_cdf,
    standardize, KsResult,
};

/// Smallest window scale at which normality of counts is asserted.
pub const CLT_MIN_SCALE: f64 = 30.0;

/// Upper edges of the min-gap histogram bins; a final open bin collects the rest.
pub const MIN_GAP_EDGES: [f64; 10] = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleSpec,
    pub h: TestFunction,
    /// The window scale `R`; roots are collected on `R · supp h`.
    pub scale: f64,
    pub trials: usize,
    pub seed: u64,
    pub grid_step: f64,
    pub workers: usize,
}

impl ExperimentConfig {
    /// Defaults: grid step 0.005 and one worker.
    pub fn new(ensemble: EnsembleSpec, h: TestFunction, scale: f64, trials: usize, seed: u64) -> Self {
        Self {
            ensemble,
            h,
            scale,
            trials,
            seed,
            grid_step: DEFAULT_GRID_STEP,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_grid_step(mut self, grid_step: f64) -> Self {
        self.grid_step = grid_step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::domain("scale R must be positive and finite"));
        }
        if !(self.grid_step > 0.0) || !self.grid_step.is_finite() {
            return Err(Error::domain("grid_step must be positive"));
        }
        if self.grid_step <= DEFAULT_REFINEMENT_TOL {
            return Err(Error::domain("grid_step must exceed the refinement tolerance"));
        }
        if self.workers == 0 {
            return Err(Error::domain("workers must be at least 1"));
        }
        Ok(())
    }

    /// `R · supp h`.
    pub fn window(&self) -> (f64, f64) {
        let (lo, hi) = self.h.support();
        (self.scale * lo, self.scale * hi)
    }
}

/// Counts of per-trial minimum root gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinGapHistogram {
    /// Upper bin edges; bin `i` holds gaps in `[edges[i-1], edges[i])`.
    pub edges: Vec<f64>,
    /// One count per edge plus a final count for gaps `≥` the last edge.
    pub counts: Vec<u64>,
    /// Trials with fewer than two roots in the window.
    pub fewer_than_two_roots: u64,
}

impl MinGapHistogram {
    fn from_gaps(gaps: &[f64]) -> Self {
        let mut counts = vec![0u64; MIN_GAP_EDGES.len() + 1];
        let mut none = 0;
        for g in gaps {
            if g.is_infinite() {
                none += 1;
            } else {
                counts[MIN_GAP_EDGES.partition_point(|e| e <= g)] += 1;
            }
        }
        Self {
            edges: MIN_GAP_EDGES.to_vec(),
            counts,
            fewer_than_two_roots: none,
        }
    }

    /// Fraction of all trials whose minimum gap is below `edges[i]`.
    pub fn fraction_below_edge(&self, i: usize) -> f64 {
        let total: u64 = self.counts.iter().sum::<u64>() + self.fewer_than_two_roots;
        self.counts[..=i].iter().sum::<u64>() as f64 / total as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub per_trial: Vec<f64>,
    pub root_counts: Vec<usize>,
    pub mean: f64,
    pub variance: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// k-statistics of orders 1 through `min(4, trials / 10)`.
    pub cumulants: Vec<f64>,
    pub ks_statistic: Option<f64>,
    pub ks_pvalue: Option<f64>,
    pub min_gap_histogram: MinGapHistogram,
    /// Set when fewer than two trials were run or all values coincide.
    pub degenerate: bool,
    /// Whether `R` is large enough for normality to be expected.
    pub normal_regime: bool,
    pub rng_algorithm_id: String,
    /// Wall-clock time; not serialized so reports stay byte-identical.
    #[serde(skip)]
    pub runtime_seconds: f64,
}

/// Runs `f(trial_index)` for every trial on a pool of `workers` threads and
/// returns the outcomes in trial order. The first failing trial (by index)
/// aborts the experiment.
pub(crate) fn run_trials<T: Send>(
    trials: usize,
    workers: usize,
    f: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<T>> =
        pool.install(|| (0..trials as u64).into_par_iter().map(&f).collect());
    outcomes
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::Trial {
                index: i as u64,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Roots of trial `index` on `window`.
pub(crate) fn trial_roots(
    ensemble: &Ensemble,
    seed: u64,
    index: u64,
    window: (f64, f64),
    grid_step: f64,
) -> Result<RootList> {
    let sample = ensemble.sample(seed, index);
    real_roots(&sample, window, grid_step, DEFAULT_REFINEMENT_TOL)
}

/// Samples `trials` polynomials, evaluates `Σ h(x/R)` over their roots in
/// `R · supp h`, and summarizes.
pub fn run_count_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let ensemble = config.ensemble.build()?;
    let window = config.window();
    let outcomes = run_trials(config.trials, config.workers, |i| {
        let roots = trial_roots(&ensemble, config.seed, i, window, config.grid_step)?;
        let stat = linear_statistic(&roots, &config.h, config.scale)?;
        Ok((stat, roots.len(), min_gap(&roots)))
    })?;
    let per_trial: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    let root_counts: Vec<usize> = outcomes.iter().map(|o| o.1).collect();
    let gaps: Vec<f64> = outcomes.iter().map(|o| o.2).collect();
    let (mean, variance) = mean_variance(&per_trial);
    let degenerate = per_trial.len() < 2 || variance == 0.0;
    let order = (per_trial.len() / 10).min(4);
    let cumulants = if order >= 1 { empirical_cumulants(&per_trial, order)? } else { Vec::new() };
    let ks = if degenerate { None } else { Some(ks_normality(&per_trial)?) };
    Ok(ExperimentReport {
        config: config.clone(),
        stderr: (variance / per_trial.len() as f64).sqrt(),
        per_trial,
        root_counts,
        mean,
        variance,
        cumulants,
        ks_statistic: ks.map(|k| k.statistic),
        ks_pvalue: ks.map(|k| k.pvalue),
        min_gap_histogram: MinGapHistogram::from_gaps(&gaps),
        degenerate,
        normal_regime: config.scale >= CLT_MIN_SCALE,
        rng_algorithm_id: RNG_ALGORITHM_ID.to_string(),
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

/// [`run_count_experiment`] followed by a Kolmogorov–Smirnov test of the
/// standardized statistics. Windows with `R < 30` still produce a report,
/// flagged with `normal_regime = false`.
pub fn clt_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let report = run_count_experiment(config)?;
    if report.degenerate {
        return Err(Error::Degenerate(
            "linear statistic has zero sample variance; cannot standardize".into(),
        ));
    }
    Ok(report)
}

/// Histogram of standardized values on `bins` equal cells over `[-4, 4]`;
/// returns `(cell centre, empirical density, standard normal density)`.
pub fn standardized_histogram(values: &[f64], bins: usize) -> Result<Vec<(f64, f64, f64)>> {
    if bins == 0 {
        return Err(Error::domain("bins must be positive"));
    }
    let z = standardize(values)?;
    let width = 8.0 / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in &z {
        let i = ((v + 4.0) / width).floor();
        if i >= 0.0 && (i as usize) < bins {
            counts[i as usize] += 1;
        }
    }
    let n = z.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let x = -4.0 + (i as f64 + 0.5) * width;
            let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
            (x, *c as f64 / (n * width), phi)
        })
        .collect())
}
