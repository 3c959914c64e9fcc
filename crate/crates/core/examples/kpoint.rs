//! Three- and four-point correlations and their factorization when one point
//! moves away from the others.

use std::f64::consts::PI;

use rootlab::ensemble::{EnsembleSpec, Family, KernelSource};
use rootlab::kacrice::{kpoint_correlation, pair_correlation_closed, DEFAULT_QMC_BUDGET};

fn main() -> rootlab::Result<()> {
    let series = KernelSource::WeylSeries;
    let pair = pair_correlation_closed(1.0).value;
    println!("ρ₂(0, 1)                 = {pair:.10}");
    for far in [2.0, 4.0, 8.0] {
        let r = kpoint_correlation(&[0.0, 1.0, 1.0 + far], &series, DEFAULT_QMC_BUDGET)?;
        println!("ρ₃(0, 1, 1+{far}) / (ρ₂ρ₁) = {:.10}", r.value / (pair / PI));
    }
    let r = kpoint_correlation(&[0.0, 1.0, 2.0, 3.0], &series, DEFAULT_QMC_BUDGET)?;
    println!("ρ₄(0, 1, 2, 3)           = {:.6e} ± {:.1e} ({:?})", r.value, r.stderr, r.method);

    let kac = KernelSource::Finite(EnsembleSpec::new(Family::Kac, 30)?.build()?);
    let r = kpoint_correlation(&[-0.9, 0.2, 0.95], &kac, DEFAULT_QMC_BUDGET)?;
    println!("Kac n=30 ρ₃(-0.9, 0.2, 0.95) = {:.6e}", r.value);
    Ok(())
}
