//! Exact distinct-root counting with Sturm sequences over the integers.
//!
//! `f64` coefficients are exact dyadic rationals, so after a common power of
//! two they become integers. The sequence is built with the
//! subresultant pseudo-remainder sequence, whose signs are tracked against
//! the classical negated remainders; evaluation at dyadic points is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest degree accepted by [`sturm_count`].
pub const MAX_STURM_DEGREE: usize = 60;

type Poly = Vec<BigInt>;

fn decompose(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    if exp == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1i64 << 52)), exp - 1075)
    }
}

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn is_zero(p: &Poly) -> bool {
    p.iter().all(Zero::is_zero)
}

fn primitive(mut p: Poly) -> Poly {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut p {
            *c /= &g;
        }
    }
    p
}

fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// `lc(b)^{δ+1} · rem(a, b)` with `δ = deg a - deg b`.
fn pseudo_remainder(a: &Poly, b: &Poly) -> Poly {
    let db = b.len() - 1;
    let lcb = &b[db];
    let delta = a.len() - b.len();
    let mut r = a.clone();
    let mut steps = 0usize;
    while r.len() > db && !is_zero(&r) {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lcb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lcr * bc;
        }
        r.pop();
        trim(&mut r);
        steps += 1;
    }
    for _ in steps..=delta {
        for c in r.iter_mut() {
            *c *= lcb;
        }
    }
    r
}

fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// Subresultant remainder sequence of `p, p'`. Each element is returned with
/// a sign `ε` such that `ε · element` is a positive multiple of the
/// corresponding classical Sturm polynomial.
fn sturm_sequence(p: Poly) -> Vec<(Poly, i32)> {
    let p0 = primitive(p);
    let p1 = primitive(derivative(&p0));
    let mut seq = vec![(p0, 1), (p1, 1)];
    let (mut g, mut h) = (BigInt::one(), BigInt::one());
    loop {
        let n = seq.len();
        let (a, ea) = (&seq[n - 2].0, seq[n - 2].1);
        let b = &seq[n - 1].0;
        if is_zero(b) || b.len() == 1 {
            break;
        }
        let delta = a.len() - b.len();
        let r = pseudo_remainder(a, b);
        if is_zero(&r) {
            break;
        }
        let divisor = &g * h.pow(delta as u32);
        let r: Poly = r.into_iter().map(|c| c / &divisor).collect();
        let lcb = b[b.len() - 1].clone();
        let pow_sign = |s: i32, k: usize| if k % 2 == 0 { 1 } else { s };
        let eps = -ea
            * pow_sign(sign_of(&lcb), delta + 1)
            * sign_of(&g)
            * pow_sign(sign_of(&h), delta);
        g = lcb;
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g.pow(d as u32) / h.pow(d as u32 - 1),
        };
        seq.push((r, eps));
    }
    if seq.last().is_some_and(|(p, _)| is_zero(p)) {
        seq.pop();
    }
    seq
}

#[derive(Clone, Copy)]
enum Point {
    NegInf,
    PosInf,
    Finite(f64),
}

fn sign_at(p: &Poly, x: Point) -> i32 {
    let d = p.len() - 1;
    let lead = sign_of(&p[d]);
    match x {
        Point::PosInf => lead,
        Point::NegInf => if d % 2 == 0 { lead } else { -lead },
        Point::Finite(v) => {
            let (m, e) = decompose(v);
            // p(m 2^e) · 2^{q d} with q = max(0, -e).
            let q = if e < 0 { (-e) as usize } else { 0 };
            let num = if e > 0 { BigInt::from(m) << (e as usize) } else { BigInt::from(m) };
            let mut acc = p[d].clone();
            for i in (0..d).rev() {
                acc = acc * &num + (&p[i] << (q * (d - i)));
            }
            sign_of(&acc)
        }
    }
}

fn variations(seq: &[(Poly, i32)], x: Point) -> usize {
    let mut last = 0;
    let mut count = 0;
    for (p, eps) in seq {
        let s = eps * sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn to_point(x: f64) -> Result<Point> {
    if x.is_nan() {
        Err(Error::domain("NaN window endpoint"))
    } else if x == f64::INFINITY {
        Ok(Point::PosInf)
    } else if x == f64::NEG_INFINITY {
        Ok(Point::NegInf)
    } else {
        Ok(Point::Finite(x))
    }
}

/// Number of distinct real roots of `Σ coefficients[k] x^k` in `(a, b]`.
/// Endpoints may be infinite. Leading zero coefficients are stripped.
pub fn sturm_count(coefficients: &[f64], window: (f64, f64)) -> Result<usize> {
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("non-finite coefficient"));
    }
    let mut c: Vec<f64> = coefficients.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    if c.iter().all(|v| *v == 0.0) {
        return Err(Error::domain("the zero polynomial has no finite root count"));
    }
    let degree = c.len() - 1;
    if degree > MAX_STURM_DEGREE {
        return Err(Error::Unsupported(format!(
            "Sturm oracle limited to degree {MAX_STURM_DEGREE}, got {degree}"
        )));
    }
    let (a, b) = (to_point(window.0)?, to_point(window.1)?);
    if window.0 >= window.1 || degree == 0 {
        return Ok(0);
    }
    let parts: Vec<(i64, i32)> = c.iter().map(|v| decompose(*v)).collect();
    let min_e = parts
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|(_, e)| *e)
        .min()
        .unwrap_or(0);
    let poly: Poly = parts
        .iter()
        .map(|(m, e)| BigInt::from(*m) << ((e - min_e) as usize))
        .collect();
    let seq = sturm_sequence(poly);
    let (va, vb) = (variations(&seq, a), variations(&seq, b));
    Ok(va.saturating_sub(vb))
}
