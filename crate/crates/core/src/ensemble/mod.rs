//! Gaussian polynomial families `P_n(x) = Σ c_k ξ_k x^k`.
//!
//! Three weight profiles are supported: Weyl (`c_k = 1/√k!`), Kac (`c_k = 1`)
//! and Kostlan (`c_k = √C(n,k)`). All share `c_0 = 1`, which the evaluator
//! relies on when it walks the ratio table `c_k / c_{k-1}`.

mod eval;
mod kernel;
mod rng;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use eval::{evaluate_scaled, SignedLogValue};
pub use kernel::{kernel_jet, DiagonalMoments, KernelJet, KernelSource, ScaledJet};
pub use rng::{sample_coefficients, uniform_open, GaussianStream, RNG_ALGORITHM_ID};
pub(crate) use rng::inverse_normal_cdf;

/// Largest Kostlan degree for which binomial weights are tabulated.
pub const MAX_KOSTLAN_DEGREE: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Weyl,
    Kac,
    Kostlan,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Weyl => "weyl",
            Family::Kac => "kac",
            Family::Kostlan => "kostlan",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weyl" => Ok(Family::Weyl),
            "kac" => Ok(Family::Kac),
            "kostlan" => Ok(Family::Kostlan),
            other => Err(Error::domain(format!("unknown family '{other}'"))),
        }
    }
}

/// Family and degree of a Gaussian polynomial ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub degree: usize,
}

impl EnsembleSpec {
    pub fn new(family: Family, degree: usize) -> Result<Self> {
        if family == Family::Kostlan && degree > MAX_KOSTLAN_DEGREE {
            return Err(Error::domain(format!(
                "Kostlan degree {degree} exceeds the supported maximum {MAX_KOSTLAN_DEGREE}"
            )));
        }
        Ok(Self { family, degree })
    }

    /// Weyl ensemble truncated deep enough to stand in for the infinite
    /// series on `[-R, R]`: `n = ceil((R + 10)^2)`.
    pub fn series_like(scale: f64) -> Self {
        Self {
            family: Family::Weyl,
            degree: series_like_degree(scale),
        }
    }

    /// Precomputes the weight tables for this spec.
    pub fn build(&self) -> Result<Ensemble> {
        Ensemble::new(*self)
    }
}

/// Truncation degree used to emulate the Weyl series on `[-R, R]`.
pub fn series_like_degree(scale: f64) -> usize {
    let r = scale.abs() + 10.0;
    (r * r).ceil() as usize
}

/// An [`EnsembleSpec`] together with its tabulated weights. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Ensemble {
    spec: EnsembleSpec,
    table: Arc<WeightTable>,
}

#[derive(Debug)]
pub(crate) struct WeightTable {
    /// `ratio[k] = c_k / c_{k-1}` for `k >= 1`; `ratio[0] = 1`.
    pub(crate) ratio: Vec<f64>,
    /// `ln c_k`.
    pub(crate) log_weight: Vec<f64>,
    /// `ln(c_k / c_{k-1})`, nonincreasing in `k`.
    pub(crate) log_ratio: Vec<f64>,
}

impl Ensemble {
    pub fn new(spec: EnsembleSpec) -> Result<Self> {
        let spec = EnsembleSpec::new(spec.family, spec.degree)?;
        let n = spec.degree;
        let mut ratio = Vec::with_capacity(n + 1);
        let mut log_ratio = Vec::with_capacity(n + 1);
        ratio.push(1.0);
        log_ratio.push(0.0);
        for k in 1..=n {
            let kf = k as f64;
            let (r, lr) = match spec.family {
                Family::Weyl => (1.0 / kf.sqrt(), -0.5 * kf.ln()),
                Family::Kac => (1.0, 0.0),
                Family::Kostlan => {
                    let q = (n - k + 1) as f64 / kf;
                    (q.sqrt(), 0.5 * q.ln())
                }
            };
            ratio.push(r);
            log_ratio.push(lr);
        }
        let mut log_weight = Vec::with_capacity(n + 1);
        log_weight.push(0.0);
        // Kahan summation keeps the tabulated logs accurate at large n.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for lr in &log_ratio[1..] {
            let y = lr - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            log_weight.push(sum);
        }
        Ok(Self {
            spec,
            table: Arc::new(WeightTable {
                ratio,
                log_weight,
                log_ratio,
            }),
        })
    }

    pub fn spec(&self) -> EnsembleSpec {
        self.spec
    }

    pub fn degree(&self) -> usize {
        self.spec.degree
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub(crate) fn table(&self) -> &WeightTable {
        &self.table
    }

    /// `ln c_k`.
    pub fn log_weight(&self, k: usize) -> Result<f64> {
        self.table
            .log_weight
            .get(k)
            .copied()
            .ok_or_else(|| Error::domain(format!("index {k} exceeds degree {}", self.degree())))
    }

    /// Sample keyed by `(seed, trial_index)`.
    pub fn sample(&self, seed: u64, trial_index: u64) -> CoefficientSample {
        let xi = rng::standard_normals(seed, trial_index, self.degree() + 1);
        CoefficientSample {
            ensemble: self.clone(),
            xi,
            seed_tag: Some(SeedTag { seed, trial_index }),
        }
    }

    /// Sample with explicitly chosen Gaussian draws.
    pub fn sample_from_xi(&self, xi: Vec<f64>) -> Result<CoefficientSample> {
        if xi.len() != self.degree() + 1 {
            return Err(Error::domain(format!(
                "expected {} coefficients, got {}",
                self.degree() + 1,
                xi.len()
            )));
        }
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite coefficient draw"));
        }
        Ok(CoefficientSample {
            ensemble: self.clone(),
            xi,
            seed_tag: None,
        })
    }
}

/// Deterministic weight `c_k` of the family at degree `n`.
///
/// Weights are tabulated in the log domain; a [`Error::Range`] is returned when
/// `c_k` itself is not representable as an `f64` (for instance Weyl weights
/// beyond `k ≈ 300`). Use [`log_weight`] in that regime.
pub fn deterministic_weight(family: Family, k: usize, n: usize) -> Result<f64> {
    if k > n {
        return Err(Error::domain(format!("weight index {k} exceeds degree {n}")));
    }
    let direct = match family {
        Family::Kac => Some(1.0),
        Family::Weyl if k <= 170 => {
            let mut c = 1.0f64;
            for j in 1..=k {
                c /= (j as f64).sqrt();
            }
            Some(c)
        }
        Family::Kostlan if n <= 1000 => {
            let kk = k.min(n - k);
            let mut b = 1.0f64;
            for j in 0..kk {
                b = b * (n - j) as f64 / (j + 1) as f64;
            }
            b.is_finite().then(|| b.sqrt())
        }
        _ => None,
    };
    if let Some(c) = direct {
        return Ok(c);
    }
    let lw = log_weight(family, k, n)?;
    let c = lw.exp();
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Range {
            what: format!("{family} weight c_{k} at degree {n}"),
            log_magnitude: lw,
        });
    }
    Ok(c)
}

/// `ln c_k`, finite for every admissible `(k, n)`.
pub fn log_weight(family: Family, k: usize, n: usize) -> Result<f64> {
    use statrs::function::gamma::ln_gamma;
    if k > n {
        return Err(Error::domain(format!("weight index {k} exceeds degree {n}")));
    }
    if family == Family::Kostlan && n > MAX_KOSTLAN_DEGREE {
        return Err(Error::domain(format!(
            "Kostlan degree {n} exceeds the supported maximum"
        )));
    }
    let lf = |m: usize| ln_gamma(m as f64 + 1.0);
    Ok(match family {
        Family::Kac => 0.0,
        Family::Weyl => -0.5 * lf(k),
        Family::Kostlan => 0.5 * (lf(n) - lf(k) - lf(n - k)),
    })
}

/// Draws of one polynomial: `P(x) = Σ c_k ξ_k x^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedTag {
    pub seed: u64,
    pub trial_index: u64,
}

#[derive(Debug, Clone)]
pub struct CoefficientSample {
    ensemble: Ensemble,
    xi: Vec<f64>,
    seed_tag: Option<SeedTag>,
}

impl CoefficientSample {
    pub fn spec(&self) -> EnsembleSpec {
        self.ensemble.spec()
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    /// The standard Gaussian draws `ξ_0, …, ξ_n`.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn seed_tag(&self) -> Option<SeedTag> {
        self.seed_tag
    }

    /// Power-basis coefficients `c_k ξ_k` rounded to `f64`.
    pub fn power_coefficients(&self) -> Result<Vec<f64>> {
        let spec = self.spec();
        self.xi
            .iter()
            .enumerate()
            .map(|(k, x)| Ok(deterministic_weight(spec.family, k, spec.degree)? * x))
            .collect()
    }

    /// Variance-normalised value at `x`; see [`evaluate_scaled`].
    pub fn evaluate_scaled(&self, x: f64) -> Result<SignedLogValue> {
        evaluate_scaled(self, x)
    }

    /// Sign of `P(x)` computed from the terms that matter at `x` only. Terms
    /// whose magnitude falls below `e^-80` times the largest one are skipped.
    pub fn sign_at(&self, x: f64) -> i8 {
        eval::pruned_sign(self, x)
    }
}
