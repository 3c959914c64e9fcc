use std::ops::{Mul, Neg};

use super::{CoefficientSample, Family};
use crate::{Error, Result};

const RENORM_EXP: i32 = 512;
const RENORM_HI: f64 = 1.340_780_792_994_259_7e154; // 2^512
const RENORM_LO: f64 = 7.458_340_731_200_207e-155; // 2^-512
const PRUNE_LOG: f64 = 80.0;

/// A real number stored as a sign and a natural-log magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    pub sign: i8,
    /// `ln |value|`; meaningless when `sign == 0`.
    pub logmag: f64,
}

impl SignedLogValue {
    pub const ZERO: Self = Self {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                logmag: v.abs().ln(),
            }
        }
    }

    /// Back to an ordinary float; overflows to `±inf` and underflows to `0`.
    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }
}

impl Mul for SignedLogValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign,
                logmag: self.logmag + rhs.logmag,
            }
        }
    }
}

impl Neg for SignedLogValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

/// `ln` of the variance normaliser: `e^{-x²/2}` (Weyl), `1` (Kac),
/// `(1+x²)^{-n/2}` (Kostlan).
fn log_normalizer(family: Family, n: usize, x: f64) -> f64 {
    match family {
        Family::Weyl => -0.5 * x * x,
        Family::Kac => 0.0,
        Family::Kostlan => -0.5 * n as f64 * (x * x).ln_1p(),
    }
}

/// Horner over `k = lo..=hi` of `Σ (c_k / c_lo) ξ_k x^{k-lo}`, returned as a
/// mantissa and a power-of-two exponent. The running value is kept within
/// `[2^-512, 2^512]` by shifting it into the exponent.
fn horner(xi: &[f64], ratio: &[f64], x: f64, lo: usize, hi: usize) -> (f64, i32) {
    let mut acc = xi[hi];
    let mut exp = 0i32;
    let mut scale = 1.0f64;
    for k in (lo..hi).rev() {
        acc = xi[k].mul_add(scale, (ratio[k + 1] * x) * acc);
        let a = acc.abs();
        if a > RENORM_HI {
            acc *= RENORM_LO;
            exp += RENORM_EXP;
            scale = 2f64.powi(-exp);
        } else if exp > 0 && a < RENORM_LO && a != 0.0 {
            acc *= RENORM_HI;
            exp -= RENORM_EXP;
            scale = 2f64.powi(-exp);
        }
    }
    (acc, exp)
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign and log-magnitude of the variance-normalised value `q(x) = N(x) P(x)`,
/// where `N` is the family normaliser. Every term is included.
pub fn evaluate_scaled(sample: &CoefficientSample, x: f64) -> Result<SignedLogValue> {
    if !x.is_finite() {
        return Err(Error::domain(format!("evaluation point {x} is not finite")));
    }
    let spec = sample.spec();
    let table = sample.ensemble().table();
    let (m, e) = horner(&sample.xi, &table.ratio, x, 0, spec.degree);
    if m == 0.0 {
        return Ok(SignedLogValue::ZERO);
    }
    Ok(SignedLogValue {
        sign: sign_of(m),
        logmag: m.abs().ln()
            + f64::from(e) * std::f64::consts::LN_2
            + log_normalizer(spec.family, spec.degree, x),
    })
}

/// Index range `[lo, hi]` of terms within `e^-PRUNE_LOG` of the largest
/// `|c_k x^k|`. Relies on `ln c_k` being concave in `k`.
pub(crate) fn significant_range(log_weight: &[f64], log_ratio: &[f64], x: f64) -> (usize, usize) {
    let n = log_weight.len() - 1;
    if x == 0.0 {
        return (0, 0);
    }
    let lx = x.abs().ln();
    // First k whose successor does not grow the term.
    let peak = partition_point(0, n, |k| log_ratio[k + 1] + lx > 0.0);
    let lw = |k: usize| log_weight[k] + k as f64 * lx;
    let threshold = lw(peak) - PRUNE_LOG;
    let lo = partition_point(0, peak, |k| lw(k) < threshold);
    let hi = partition_point(peak, n, |k| lw(k + 1) >= threshold);
    (lo, hi)
}

/// Smallest `k` in `[lo, hi]` with `!pred(k)`, assuming `pred` is true on a
/// prefix; returns `hi` when `pred` holds on all of `[lo, hi)`.
fn partition_point(lo: usize, hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let mid = a + (b - a) / 2;
        if pred(mid) {
            a = mid + 1;
        } else {
            b = mid;
        }
    }
    a
}

/// Plain Horner over `k = lo..=hi`. Inside the significant range every
/// partial sum stays within a few hundred binades of `ξ`, so no rescaling is
/// needed.
fn horner_unscaled(xi: &[f64], ratio: &[f64], x: f64, lo: usize, hi: usize) -> f64 {
    let mut acc = xi[hi];
    for k in (lo..hi).rev() {
        acc = xi[k] + (ratio[k + 1] * x) * acc;
    }
    acc
}

/// [`horner_unscaled`] split into four contiguous blocks evaluated in
/// lockstep, which breaks the serial dependency chain. Block `b` yields its
/// own Horner value and the product of its step factors; the blocks are
/// stitched together at the end.
fn horner_blocked(xi: &[f64], ratio: &[f64], x: f64, lo: usize, hi: usize) -> f64 {
    let len = hi - lo + 1;
    if len < 32 {
        return horner_unscaled(xi, ratio, x, lo, hi);
    }
    let m = len / 4;
    let starts = [lo, lo + m, lo + 2 * m, lo + 3 * m];
    let mut top = [lo + m - 1, lo + 2 * m - 1, lo + 3 * m - 1, hi];
    let mut acc = top.map(|k| xi[k]);
    let mut prod = [1.0f64; 4];
    // Bring the (longer) last block down to `m` remaining entries.
    while top[3] > starts[3] + m - 1 {
        top[3] -= 1;
        let r = ratio[top[3] + 1] * x;
        acc[3] = xi[top[3]] + r * acc[3];
        prod[3] *= r;
    }
    for j in 1..m {
        for b in 0..4 {
            let k = top[b] - j;
            let r = ratio[k + 1] * x;
            acc[b] = xi[k] + r * acc[b];
            prod[b] *= r;
        }
    }
    let mut factor = 1.0;
    let mut total = acc[0];
    for b in 1..4 {
        factor *= prod[b - 1] * (ratio[starts[b]] * x);
        total += factor * acc[b];
    }
    total
}

pub(crate) fn pruned_sign(sample: &CoefficientSample, x: f64) -> i8 {
    let table = sample.ensemble().table();
    let (lo, hi) = significant_range(&table.log_weight, &table.log_ratio, x);
    let m = horner_blocked(&sample.xi, &table.ratio, x, lo, hi);
    let s = sign_of(m);
    if x < 0.0 && lo % 2 == 1 {
        -s
    } else {
        s
    }
}
