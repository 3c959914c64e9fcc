//! Expected number of real zeros of Kac polynomials over the whole line, and
//! its offset from `(2/π) log n`.

use std::f64::consts::PI;

use rootlab::ensemble::{EnsembleSpec, Family, KernelSource};
use rootlab::kacrice::expected_count_quadrature;

fn main() -> rootlab::Result<()> {
    println!("{:>7} {:>12} {:>12}", "n", "E N_n", "offset");
    for n in [10usize, 100, 1000, 10_000, 100_000] {
        let src = KernelSource::Finite(EnsembleSpec::new(Family::Kac, n)?.build()?);
        let e = expected_count_quadrature(&src, (f64::NEG_INFINITY, f64::INFINITY))?.value;
        println!("{n:>7} {e:>12.7} {:>12.7}", e - 2.0 / PI * (n as f64).ln());
    }
    Ok(())
}
