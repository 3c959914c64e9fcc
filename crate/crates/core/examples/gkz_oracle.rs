//! Kac correlation densities from the root factorization, next to the
//! Kac–Rice values for the same polynomial.

use rootlab::ensemble::{EnsembleSpec, Family, KernelSource};
use rootlab::kacrice::{gkz_density_oracle, kpoint_correlation, one_point_intensity, DEFAULT_QMC_BUDGET};

fn main() -> rootlab::Result<()> {
    println!("{:>2} {:>14} {:>16} {:>16}", "n", "points", "factorization", "Kac–Rice");
    for n in [2usize, 4, 6] {
        let src = KernelSource::Finite(EnsembleSpec::new(Family::Kac, n)?.build()?);
        let g = gkz_density_oracle(n, &[0.3], 32)?;
        println!("{n:>2} {:>14} {g:>16.12} {:>16.12}", "0.3", one_point_intensity(&src, 0.3)?);
        let g = gkz_density_oracle(n, &[-0.4, 0.25], 32)?;
        let k = kpoint_correlation(&[-0.4, 0.25], &src, DEFAULT_QMC_BUDGET)?.value;
        println!("{n:>2} {:>14} {g:>16.12} {k:>16.12}", "-0.4, 0.25");
    }
    Ok(())
}
