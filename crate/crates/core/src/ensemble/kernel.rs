//! Covariance kernel `K(s,t) = E P(s) P(t) = Σ c_k² s^k t^k` and its first
//! mixed partials.

use super::Ensemble;
use crate::{Error, Result};

/// Largest `ln K` accepted before [`kernel_jet`] reports a range error.
const MAX_LOG_SCALE: f64 = 700.0;

/// `K`, `∂_s K`, `∂_t K`, `∂_s∂_t K` at `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelJet {
    pub k: f64,
    pub k_s: f64,
    pub k_t: f64,
    pub k_st: f64,
}

/// A kernel jet divided by `e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledJet {
    pub log_scale: f64,
    pub k: f64,
    pub k_s: f64,
    pub k_t: f64,
    pub k_st: f64,
}

/// Diagonal quantities `a = K(t,t)`, `b = K_st(t,t)`, `c = K_s(t,t)` and the
/// discriminant `ab - c²`, all divided by `e^{log_scale}` (the discriminant by
/// `e^{2 log_scale}`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalMoments {
    pub log_scale: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub disc: f64,
}

/// Which covariance kernel to use.
#[derive(Debug, Clone)]
pub enum KernelSource {
    /// The truncated kernel of a finite-degree family.
    Finite(Ensemble),
    /// The limiting Weyl series, `K(s,t) = e^{st}`.
    WeylSeries,
}

/// Neumaier-compensated accumulator.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// `j · ln|x|` with the convention `0 · ln 0 = 0`.
fn pow_log(j: usize, lx: f64) -> f64 {
    if j == 0 {
        0.0
    } else {
        j as f64 * lx
    }
}

fn pow_sign(j: usize, x: f64) -> f64 {
    if j % 2 == 1 && x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

impl KernelSource {
    /// The jet at `(s, t)` divided by a common positive scale.
    pub fn scaled_jet(&self, s: f64, t: f64) -> Result<ScaledJet> {
        if !s.is_finite() || !t.is_finite() {
            return Err(Error::domain("kernel arguments must be finite"));
        }
        match self {
            KernelSource::WeylSeries => Ok(ScaledJet {
                log_scale: s * t,
                k: 1.0,
                k_s: t,
                k_t: s,
                k_st: 1.0 + s * t,
            }),
            // Evaluate in a canonical argument order so the jet is exactly
            // symmetric.
            KernelSource::Finite(ens) if s <= t => Ok(finite_scaled_jet(ens, s, t)),
            KernelSource::Finite(ens) => {
                let j = finite_scaled_jet(ens, t, s);
                Ok(ScaledJet { k_s: j.k_t, k_t: j.k_s, ..j })
            }
        }
    }

    /// Diagonal moments at `t` with a cancellation-free discriminant.
    pub fn diagonal(&self, t: f64) -> Result<DiagonalMoments> {
        if !t.is_finite() {
            return Err(Error::domain("kernel argument must be finite"));
        }
        match self {
            KernelSource::WeylSeries => Ok(DiagonalMoments {
                log_scale: t * t,
                a: 1.0,
                b: 1.0 + t * t,
                c: t,
                disc: 1.0,
            }),
            KernelSource::Finite(ens) => Ok(finite_diagonal(ens, t)),
        }
    }

    /// Covariance of `(g(s), g'(s))` with `(g(t), g'(t))`, where
    /// `g = P / √K(·,·)` is the unit-variance rescaling of the process. The
    /// rescaling leaves the zero set, and hence every correlation function,
    /// unchanged while keeping entries of order one.
    pub fn normalized_cross(&self, s: f64, t: f64) -> Result<[[f64; 2]; 2]> {
        if let KernelSource::WeylSeries = self {
            let d = t - s;
            let g = (-0.5 * d * d).exp();
            return Ok([[g, -d * g], [d * g, (1.0 - d * d) * g]]);
        }
        let ds = self.diagonal(s)?;
        let dt = self.diagonal(t)?;
        if ds.a <= 0.0 || dt.a <= 0.0 {
            return Err(Error::Degenerate("kernel vanishes on the diagonal".into()));
        }
        let us = ds.c / ds.a;
        let ut = dt.c / dt.a;
        if s == t {
            let var_d = ds.disc / (ds.a * ds.a);
            return Ok([[1.0, 0.0], [0.0, var_d]]);
        }
        let j = self.scaled_jet(s, t)?;
        let factor = (j.log_scale
            - 0.5 * (ds.log_scale + ds.a.ln())
            - 0.5 * (dt.log_scale + dt.a.ln()))
        .exp();
        Ok([
            [factor * j.k, factor * (j.k_t - ut * j.k)],
            [
                factor * (j.k_s - us * j.k),
                factor * (j.k_st - ut * j.k_s - us * j.k_t + us * ut * j.k),
            ],
        ])
    }
}

fn finite_scaled_jet(ens: &Ensemble, s: f64, t: f64) -> ScaledJet {
    let lw = &ens.table().log_weight;
    let n = ens.degree();
    let (ls, lt) = (s.abs().ln(), t.abs().ln());
    let lk = |k: usize| (k as f64).ln();
    // Log-magnitudes and signs of the four term families.
    let term = |k: usize| {
        let c2 = 2.0 * lw[k];
        let base = (
            c2 + pow_log(k, ls) + pow_log(k, lt),
            pow_sign(k, s) * pow_sign(k, t),
        );
        if k == 0 {
            return [base, (f64::NEG_INFINITY, 1.0), (f64::NEG_INFINITY, 1.0), (f64::NEG_INFINITY, 1.0)];
        }
        [
            base,
            (
                lk(k) + c2 + pow_log(k - 1, ls) + pow_log(k, lt),
                pow_sign(k - 1, s) * pow_sign(k, t),
            ),
            (
                lk(k) + c2 + pow_log(k, ls) + pow_log(k - 1, lt),
                pow_sign(k, s) * pow_sign(k - 1, t),
            ),
            (
                2.0 * lk(k) + c2 + pow_log(k - 1, ls) + pow_log(k - 1, lt),
                pow_sign(k - 1, s) * pow_sign(k - 1, t),
            ),
        ]
    };
    let mut scale = f64::NEG_INFINITY;
    for k in 0..=n {
        for (l, _) in term(k) {
            scale = scale.max(l);
        }
    }
    let mut acc = [Compensated::default(); 4];
    for k in 0..=n {
        for (slot, (l, sg)) in acc.iter_mut().zip(term(k)) {
            if l > f64::NEG_INFINITY {
                slot.add(sg * (l - scale).exp());
            }
        }
    }
    ScaledJet {
        log_scale: scale,
        k: acc[0].value(),
        k_s: acc[1].value(),
        k_t: acc[2].value(),
        k_st: acc[3].value(),
    }
}

fn finite_diagonal(ens: &Ensemble, t: f64) -> DiagonalMoments {
    let lw = &ens.table().log_weight;
    let n = ens.degree();
    if t.abs() < 1e-150 || n == 0 {
        // Only k = 0 and k = 1 survive at the origin.
        let c1sq = if n >= 1 { (2.0 * lw[1]).exp() } else { 0.0 };
        return DiagonalMoments {
            log_scale: 0.0,
            a: 1.0,
            b: c1sq,
            c: 0.0,
            disc: c1sq,
        };
    }
    let l2 = 2.0 * t.abs().ln();
    let logs: Vec<f64> = (0..=n).map(|k| 2.0 * lw[k] + k as f64 * l2).collect();
    let scale = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - scale).exp()).collect();
    let mut s0 = Compensated::default();
    let mut s1 = Compensated::default();
    for (k, wk) in w.iter().enumerate() {
        s0.add(*wk);
        s1.add(k as f64 * wk);
    }
    let s0 = s0.value();
    let mean = s1.value() / s0;
    let mut var = Compensated::default();
    for (k, wk) in w.iter().enumerate() {
        let d = k as f64 - mean;
        var.add(wk * d * d);
    }
    let var = var.value() / s0;
    let t2 = t * t;
    DiagonalMoments {
        log_scale: scale,
        a: s0,
        b: (var + mean * mean) * s0 / t2,
        c: mean * s0 / t,
        disc: s0 * s0 * var / t2,
    }
}

/// Unscaled kernel jet. Fails with [`Error::Range`] when `K` is beyond `f64`.
pub fn kernel_jet(source: &KernelSource, s: f64, t: f64) -> Result<KernelJet> {
    let j = source.scaled_jet(s, t)?;
    if j.log_scale > MAX_LOG_SCALE {
        return Err(Error::Range {
            what: format!("kernel jet at ({s}, {t})"),
            log_magnitude: j.log_scale,
        });
    }
    let f = j.log_scale.exp();
    Ok(KernelJet {
        k: f * j.k,
        k_s: f * j.k_s,
        k_t: f * j.k_t,
        k_st: f * j.k_st,
    })
}
