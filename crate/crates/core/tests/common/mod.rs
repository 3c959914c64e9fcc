//! Extended-precision reference evaluation of Gaussian polynomials.
#![allow(dead_code)]

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use rootlab::ensemble::Family;

/// Mantissa precision in bits.
pub const PREC: u64 = 320;

/// `m · 2^e` with `|m| < 2^PREC` after normalisation.
#[derive(Clone, Debug)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        Self { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        Self { m: BigInt::from(1), e: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        let m = if x < 0.0 { -m } else { m };
        Self { m: BigInt::from(m), e }
    }

    fn normalize(mut self) -> Self {
        let bits = self.m.bits();
        if bits > PREC {
            let shift = bits - PREC;
            self.m >>= shift;
            self.e += shift as i64;
        }
        self
    }

    fn top(&self) -> i64 {
        self.m.bits() as i64 + self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::NoSign => 0,
        }
    }

    pub fn abs(&self) -> Self {
        Self { m: self.m.abs(), e: self.e }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { m: &self.m * &o.m, e: self.e + o.e }.normalize()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let gap = PREC as i64 + 64;
        if self.top() - o.top() > gap {
            return self.clone();
        }
        if o.top() - self.top() > gap {
            return o.clone();
        }
        let e = self.e.min(o.e);
        let m = (&self.m << (self.e - e) as usize) + (&o.m << (o.e - e) as usize);
        Self { m, e }.normalize()
    }

    /// `√(num / den)` to `PREC` bits.
    pub fn sqrt_ratio(num: u64, den: u64) -> Self {
        let p = PREC as usize;
        let scaled = (BigInt::from(num) << (2 * p)) / BigInt::from(den);
        Self { m: scaled.sqrt(), e: -(p as i64) }.normalize()
    }

    /// Natural logarithm of the absolute value.
    pub fn ln_abs(&self) -> f64 {
        assert!(!self.is_zero());
        let bits = self.m.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (self.m.abs() >> shift as usize).to_f64().unwrap();
        top.ln() + (shift + self.e) as f64 * std::f64::consts::LN_2
    }
}

/// Weights `c_0..c_n` of a family to `PREC` bits.
pub fn weights(family: Family, n: usize) -> Vec<BigFloat> {
    let mut c = vec![BigFloat::one()];
    for k in 1..=n {
        let step = match family {
            Family::Kac => BigFloat::one(),
            Family::Weyl => BigFloat::sqrt_ratio(1, k as u64),
            Family::Kostlan => BigFloat::sqrt_ratio((n - k + 1) as u64, k as u64),
        };
        let next = c[k - 1].mul(&step);
        c.push(next);
    }
    c
}

/// `Σ c_k ξ_k x^k` together with `Σ |c_k ξ_k x^k|`.
pub fn evaluate(weights: &[BigFloat], xi: &[f64], x: f64) -> (BigFloat, BigFloat) {
    let bx = BigFloat::from_f64(x);
    let mut pow = BigFloat::one();
    let mut sum = BigFloat::zero();
    let mut abs = BigFloat::zero();
    for (k, (c, v)) in weights.iter().zip(xi).enumerate() {
        if k > 0 {
            pow = pow.mul(&bx);
        }
        let term = c.mul(&pow).mul(&BigFloat::from_f64(*v));
        abs = abs.add(&term.abs());
        sum = sum.add(&term);
    }
    (sum, abs)
}

/// Exact integer image `2^s · p` of a float polynomial (same roots).
fn integer_poly(coeffs: &[f64]) -> Vec<BigInt> {
    let parts: Vec<BigFloat> = coeffs.iter().map(|c| BigFloat::from_f64(*c)).collect();
    let e_min = parts.iter().filter(|p| !p.is_zero()).map(|p| p.e).min().unwrap_or(0);
    parts.iter().map(|p| &p.m << (p.e - e_min) as usize).collect()
}

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        p
    } else {
        p.into_iter().map(|c| c / &g).collect()
    }
}

/// Pseudo-remainder of `a` by `b` (both trimmed, `b` nonzero).
fn pseudo_rem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().unwrap().clone();
    while a.len() >= b.len() && !(a.len() == 1 && a[0].is_zero()) {
        let la = a.last().unwrap().clone();
        let shift = a.len() - b.len();
        for c in a.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            a[shift + i] -= &la * bc;
        }
        a.pop();
        if a.is_empty() {
            a.push(BigInt::zero());
        }
        trim(&mut a);
    }
    a
}

/// True when the polynomial has no repeated complex root, decided exactly.
pub fn is_square_free(coeffs: &[f64]) -> bool {
    let mut p = integer_poly(coeffs);
    trim(&mut p);
    if p.len() <= 2 {
        return true;
    }
    let dp: Vec<BigInt> = p.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect();
    let (mut a, mut b) = (primitive(p), primitive(dp));
    loop {
        let r = pseudo_rem(a, &b);
        if r.len() == 1 && r[0].is_zero() {
            // gcd is b
            return b.len() == 1;
        }
        a = b;
        b = primitive(r);
    }
}
