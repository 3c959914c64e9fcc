//! One-dimensional quadrature: globally adaptive Gauss–Kronrod (7/15) and
//! fixed Gauss–Legendre panels.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and evaluation budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_evaluations: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-12,
            max_evaluations: 1_000_000,
        }
    }
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            ..Self::default()
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Segment {
        a,
        b,
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    }
}

/// Integrates `f` over `[a, b]` (endpoints may be infinite) splitting first at
/// the given interior `breaks`. Infinite ends are mapped to finite ones by
/// `x = c ± (1-u)/u`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Integral> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::domain("NaN integration bound"));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    if a > b {
        let r = integrate(f, b, a, breaks, tol)?;
        return Ok(Integral {
            value: -r.value,
            ..r
        });
    }
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| *x > a && *x < b && x.is_finite())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let lo_inf = a == f64::NEG_INFINITY;
    let hi_inf = b == f64::INFINITY;
    // Finite anchors for infinite ends.
    let first = match (lo_inf, hi_inf) {
        (false, _) => a,
        (true, true) => pts.first().copied().unwrap_or(0.0),
        (true, false) => pts.first().copied().unwrap_or(b),
    };
    let last = match (lo_inf, hi_inf) {
        (_, false) => b,
        (true, true) => pts.last().copied().unwrap_or(0.0),
        (false, true) => pts.last().copied().unwrap_or(a),
    };

    // Each piece is (map kind, lo, hi) in the integration variable.
    enum Piece {
        Plain(f64, f64),
        Upper(f64),
        Lower(f64),
    }
    let mut pieces = Vec::new();
    if lo_inf {
        pieces.push(Piece::Lower(first));
    }
    let mut grid = vec![first];
    grid.extend(pts.iter().copied().filter(|x| *x > first && *x < last));
    grid.push(last);
    for w in grid.windows(2) {
        if w[1] > w[0] {
            pieces.push(Piece::Plain(w[0], w[1]));
        }
    }
    if hi_inf {
        pieces.push(Piece::Upper(last));
    }

    let mut g = |u: f64, piece: &Piece| -> f64 {
        match *piece {
            Piece::Plain(_, _) => f(u),
            Piece::Upper(c) => {
                let x = c + (1.0 - u) / u;
                let v = f(x) / (u * u);
                if v.is_finite() { v } else { 0.0 }
            }
            Piece::Lower(c) => {
                let x = c - (1.0 - u) / u;
                let v = f(x) / (u * u);
                if v.is_finite() { v } else { 0.0 }
            }
        }
    };

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    let (mut value, mut error) = (0.0f64, 0.0f64);
    for (i, piece) in pieces.iter().enumerate() {
        let (lo, hi) = match *piece {
            Piece::Plain(lo, hi) => (lo, hi),
            Piece::Upper(_) | Piece::Lower(_) => (0.0, 1.0),
        };
        let seg = kronrod(&mut |u| g(u, piece), lo, hi);
        evaluations += 15;
        value += seg.value;
        error += seg.error;
        heap.push((seg, i));
    }
    loop {
        if error <= tol.abs.max(tol.rel * value.abs()) {
            // Re-sum to shed drift from the running totals.
            let (v, e) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), (s, _)| (v + s.value, e + s.error));
            if e <= tol.abs.max(tol.rel * v.abs()) {
                return Ok(Integral {
                    value: v,
                    error: e,
                    evaluations,
                });
            }
            value = v;
            error = e;
        }
        if evaluations + 30 > tol.max_evaluations {
            return Err(Error::Accuracy {
                message: format!("quadrature did not converge within {evaluations} evaluations"),
                partial: value,
                error_estimate: error,
            });
        }
        let (worst, i) = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Accuracy {
                message: "quadrature interval collapsed".into(),
                partial: value,
                error_estimate: error,
            });
        }
        let piece = &pieces[i];
        let left = kronrod(&mut |u| g(u, piece), worst.a, mid);
        let right = kronrod(&mut |u| g(u, piece), mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push((left, i));
        heap.push((right, i));
    }
}


/// Gauss–Legendre nodes and weights on `[-1, 1]`, cached per order.
pub fn gauss_legendre(order: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("cache poisoned").get(&order) {
        return Arc::clone(r);
    }
    let rule = Arc::new(legendre_rule(order));
    cache
        .lock()
        .expect("cache poisoned")
        .insert(order, Arc::clone(&rule));
    rule
}

fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre order must be positive");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule: `[a, b]` cut into `panels` equal pieces,
/// each integrated with an `order`-point rule.
pub fn gauss_legendre_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> f64 {
    if a == b || panels == 0 {
        return 0.0;
    }
    let rule = gauss_legendre(order);
    let (x, w) = (&rule.0, &rule.1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let c = lo + 0.5 * h;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * f(c + 0.5 * h * xi);
        }
        total += 0.5 * h * s;
    }
    total
}
