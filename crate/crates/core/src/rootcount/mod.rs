//! Real roots of sampled polynomials and linear statistics of them.

mod sturm;
mod testfn;

use serde::{Deserialize, Serialize};

use crate::ensemble::CoefficientSample;
use crate::{Error, Result};

pub use sturm::{sturm_count, MAX_STURM_DEGREE};
pub use testfn::{Piece, Segment, TestFunction};

/// Default scan step on the normalized axis.
pub const DEFAULT_GRID_STEP: f64 = 0.005;
/// Default absolute bisection tolerance.
pub const DEFAULT_REFINEMENT_TOL: f64 = 1e-10;

/// Sorted, de-duplicated roots found in a closed window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootList {
    pub window: (f64, f64),
    pub roots: Vec<f64>,
    pub refinement_tol: f64,
}

impl RootList {
    pub fn new(window: (f64, f64), mut roots: Vec<f64>, refinement_tol: f64) -> Result<Self> {
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(Error::domain("non-finite root"));
        }
        roots.sort_by(f64::total_cmp);
        Ok(Self {
            window,
            roots,
            refinement_tol,
        })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Roots inside `[lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        let start = self.roots.partition_point(|r| *r < lo);
        let end = self.roots.partition_point(|r| *r <= hi);
        end.saturating_sub(start)
    }
}

fn check_scan(window: (f64, f64), grid_step: f64, refinement_tol: f64) -> Result<()> {
    let (a, b) = window;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("window endpoints must be finite"));
    }
    if a > b {
        return Err(Error::domain(format!("empty window [{a}, {b}]")));
    }
    if !(grid_step > 0.0) || !grid_step.is_finite() {
        return Err(Error::domain("grid_step must be positive"));
    }
    if !(refinement_tol > 0.0) || refinement_tol >= grid_step {
        return Err(Error::domain("need 0 < refinement_tol < grid_step"));
    }
    Ok(())
}

/// Grid nodes `a, k·step (a < k·step < b), b`. Interior nodes sit on the
/// global lattice so nested windows share them.
fn grid(a: f64, b: f64, step: f64) -> impl Iterator<Item = f64> {
    let first = (a / step).floor() as i64 + 1;
    let last = (b / step).ceil() as i64 - 1;
    std::iter::once(a)
        .chain((first..=last).map(move |k| k as f64 * step).filter(move |x| *x > a && *x < b))
        .chain((b > a).then_some(b))
}

fn bisect(sign: &impl Fn(f64) -> i8, mut lo: f64, mut hi: f64, sign_lo: i8, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match sign(mid) {
            0 => return mid,
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    0.5 * (lo + hi)
}

fn scan(sign: impl Fn(f64) -> i8, window: (f64, f64), step: f64, tol: f64) -> Vec<f64> {
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|last| r - last > tol) {
            roots.push(r);
        }
    };
    let mut prev: Option<(f64, i8)> = None;
    for x in grid(window.0, window.1, step) {
        let s = sign(x);
        if s == 0 {
            push(x, &mut roots);
        } else if let Some((px, ps)) = prev {
            if ps != 0 && ps != s {
                let r = bisect(&sign, px, x, ps, tol);
                push(r, &mut roots);
            }
        }
        prev = Some((x, s));
    }
    roots
}

/// Locates the real roots of `sample` in `[a, b]` by scanning signs on a grid
/// and bisecting every sign change down to `refinement_tol`. A node where the
/// polynomial vanishes exactly is reported as a root. Pairs of roots closer
/// than the grid step may be missed.
pub fn real_roots(
    sample: &CoefficientSample,
    window: (f64, f64),
    grid_step: f64,
    refinement_tol: f64,
) -> Result<RootList> {
    check_scan(window, grid_step, refinement_tol)?;
    let roots = scan(|x| sample.sign_at(x), window, grid_step, refinement_tol);
    RootList::new(window, roots, refinement_tol)
}

/// Half-width of the finely scanned window used by [`all_real_roots`].
pub fn bulk_half_width(degree: usize) -> f64 {
    (degree as f64).sqrt() + 5.0
}

/// All real roots: a fine scan of `[-√n - 5, √n + 5]` plus a unit-step scan
/// beyond it out to `±n`.
pub fn all_real_roots(
    sample: &CoefficientSample,
    grid_step: f64,
    refinement_tol: f64,
) -> Result<RootList> {
    let n = sample.ensemble().degree();
    let w = bulk_half_width(n);
    let sign = |x: f64| sample.sign_at(x);
    let mut roots = scan(sign, (-w, w), grid_step, refinement_tol);
    let outer = n as f64;
    let mut reach = w;
    if outer > w {
        check_scan((w, outer), 1.0, refinement_tol)?;
        reach = outer;
        roots.extend(scan(sign, (w, outer), 1.0, refinement_tol).into_iter().filter(|r| *r > w));
        roots.extend(scan(sign, (-outer, -w), 1.0, refinement_tol).into_iter().filter(|r| *r < -w));
    } else {
        check_scan((-w, w), grid_step, refinement_tol)?;
    }
    RootList::new((-reach, reach), roots, refinement_tol)
}

/// `Σ h(x / R)` over the roots.
pub fn linear_statistic(roots: &RootList, h: &TestFunction, scale: f64) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain("scale R must be positive"));
    }
    Ok(roots.roots.iter().map(|x| h.eval(x / scale)).sum())
}

/// Smallest gap between consecutive roots; `+∞` with fewer than two roots.
pub fn min_gap(roots: &RootList) -> f64 {
    roots
        .roots
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}
