use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One piece of a piecewise test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    Constant(f64),
    /// Power-basis coefficients, lowest degree first.
    Polynomial(Vec<f64>),
    /// `coef · |x|^alpha`.
    Power { coef: f64, alpha: f64 },
}

impl Piece {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Piece::Constant(c) => *c,
            Piece::Polynomial(c) => c.iter().rev().fold(0.0, |acc, a| acc * x + a),
            Piece::Power { coef, alpha } => coef * x.abs().powf(*alpha),
        }
    }

    /// Upper bound for `|piece|` on `[lo, hi] ⊂ [-1, 1]`.
    fn bound(&self, lo: f64, hi: f64) -> f64 {
        let m = lo.abs().max(hi.abs());
        match self {
            Piece::Constant(c) => c.abs(),
            Piece::Polynomial(c) => c.iter().enumerate().map(|(k, a)| a.abs() * m.powi(k as i32)).sum(),
            Piece::Power { coef, alpha } => coef.abs() * m.powf(*alpha),
        }
    }

    fn holder(&self) -> f64 {
        match self {
            Piece::Power { alpha, .. } => alpha.min(1.0),
            _ => 1.0,
        }
    }
}

/// A contiguous piece `[from, to]` as written in `pieces:` JSON files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    pub piece: Piece,
}

/// Piecewise-Hölder function supported in `[-1, 1]` with finitely many
/// discontinuities. Piece `i` applies on `[b_i, b_{i+1})`; the last piece also
/// owns its right endpoint. Outside `[b_0, b_m]` the function is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    holder_exponent: f64,
}

impl TestFunction {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::domain(
                "test function needs m+1 breakpoints for m pieces (m ≥ 1)",
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite() || b.abs() > 1.0) {
            return Err(Error::domain("breakpoints must lie in [-1, 1]"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("breakpoints must be strictly increasing"));
        }
        for p in &pieces {
            let ok = match p {
                Piece::Constant(c) => c.is_finite(),
                Piece::Polynomial(c) => c.iter().all(|a| a.is_finite()),
                Piece::Power { coef, alpha } => coef.is_finite() && alpha.is_finite() && *alpha > 0.0,
            };
            if !ok {
                return Err(Error::domain(format!("invalid piece {p:?}")));
            }
        }
        let holder_exponent = pieces.iter().map(Piece::holder).fold(1.0, f64::min);
        Ok(Self {
            breakpoints,
            pieces,
            holder_exponent,
        })
    }

    /// Indicator of `[a, b] ⊂ [-1, 1]`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![Piece::Constant(1.0)])
    }

    /// Indicator of `[-1, 1]`.
    pub fn unit_box() -> Self {
        Self::indicator(-1.0, 1.0).expect("valid box")
    }

    /// `|x|` on `[-1, 1]`.
    pub fn abs() -> Self {
        Self::new(vec![-1.0, 1.0], vec![Piece::Power { coef: 1.0, alpha: 1.0 }]).expect("valid")
    }

    pub fn zero() -> Self {
        Self::new(vec![-1.0, 1.0], vec![Piece::Constant(0.0)]).expect("valid")
    }

    /// Builds a function from possibly non-adjacent segments; gaps are zero.
    pub fn from_segments(mut segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::domain("no segments"));
        }
        segments.sort_by(|a, b| a.from.total_cmp(&b.from));
        let mut breaks = vec![segments[0].from];
        let mut pieces = Vec::new();
        for s in segments {
            let last = *breaks.last().expect("nonempty");
            if s.from < last {
                return Err(Error::domain("segments overlap"));
            }
            if s.from > last {
                pieces.push(Piece::Constant(0.0));
                breaks.push(s.from);
            }
            pieces.push(s.piece);
            breaks.push(s.to);
        }
        Self::new(breaks, pieces)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn holder_exponent(&self) -> f64 {
        self.holder_exponent
    }

    /// `[b_0, b_m]`.
    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().expect("nonempty"))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&x) {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|b| *b <= x);
        let idx = i.saturating_sub(1).min(self.pieces.len() - 1);
        self.pieces[idx].eval(x)
    }

    /// `sup |h|`.
    pub fn sup_bound(&self) -> f64 {
        self.pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| p.bound(w[0], w[1]))
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.sup_bound() == 0.0
    }
}
