//! Partition combinatorics: Bell numbers, truncated correlations and the
//! moment/cumulant transforms, plus k-statistics of simulated counts.

use rootlab::ensemble::{EnsembleSpec, Family};
use rootlab::montecarlo::{run_count_experiment, ExperimentConfig};
use rootlab::partitions::*;
use rootlab::rootcount::TestFunction;

fn main() -> rootlab::Result<()> {
    let bell: Vec<usize> = (1..=10).map(|k| enumerate_partitions(k).map(|p| p.len())).collect::<rootlab::Result<_>>()?;
    println!("Bell numbers 1..10: {bell:?}");
    for p in enumerate_partitions(3)? {
        println!("  {:?}", p.blocks());
    }

    // Three-point table with a clustered pair {1,2} and an independent point 3.
    let rho = SubsetTable::from_fn(3, |mask| match mask {
        0b001 | 0b010 | 0b100 => 0.5,
        0b011 => 0.4,
        0b101 | 0b110 => 0.25,
        _ => 0.2,
    })?;
    let truncated = truncated_from_correlation(&rho);
    println!("ρ^T(1,2) = {:.3}, ρ^T(1,3) = {:.3}, ρ^T(1,2,3) = {:.3}",
        truncated.get_subset(&[1, 2]), truncated.get_subset(&[1, 3]), truncated.get_subset(&[1, 2, 3]));

    println!("Poisson(2) cumulants: {:?}", cumulants_from_moments(&[2.0, 6.0, 22.0, 94.0])?);

    let config = ExperimentConfig::new(EnsembleSpec::new(Family::Weyl, 900)?, TestFunction::unit_box(), 20.0, 1000, 3);
    let report = run_count_experiment(&config)?;
    let k = empirical_cumulants(&report.per_trial, 4)?;
    println!("root count in [-20, 20], 1000 trials: k-statistics {k:.4?}");
    Ok(())
}
