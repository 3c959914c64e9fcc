//! Real zeros of Gaussian random polynomials: sampling, root counting,
//! Kac–Rice correlation functions, cumulant combinatorics and Monte Carlo
//! experiments around the central limit theorem for root counts.
//!
//! The crate is organised by layer:
//!
//! - [`ensemble`]: polynomial families, reproducible coefficient sampling,
//!   overflow-free evaluation and covariance-kernel jets.
//! - [`rootcount`]: real-root location on a window, an exact Sturm oracle and
//!   linear statistics.
//! - [`kacrice`]: one-point intensities, the closed-form two-point function of
//!   the limiting Weyl series, general k-point correlations, the variance
//!   constant `K` and a Götze–Kaliada–Zaporozhets density oracle.
//! - [`partitions`]: set partitions and the moment / cumulant / correlation
//!   transforms.
//! - [`montecarlo`]: end-to-end experiments and their statistical checks.
//! - [`cli`]: the `rootlab` command-line front end.

pub mod cli;
pub mod ensemble;
mod error;
pub mod kacrice;
pub mod montecarlo;
pub mod partitions;
pub mod quad;
pub mod rootcount;

pub use error::{Error, Result};
