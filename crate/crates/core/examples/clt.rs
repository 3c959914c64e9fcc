//! Standardized root counts in `[-R, R]` against the standard normal, with a
//! Kolmogorov–Smirnov test and a text histogram.

use rootlab::ensemble::{EnsembleSpec, Family};
use rootlab::montecarlo::{clt_experiment, standardized_histogram, ExperimentConfig};
use rootlab::rootcount::TestFunction;

fn main() -> rootlab::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let spec = EnsembleSpec::new(Family::Weyl, 3000)?;
    let config = ExperimentConfig::new(spec, TestFunction::unit_box(), 40.0, trials, 1);
    let report = clt_experiment(&config)?;
    println!(
        "R = 40, {trials} trials: mean {:.3}, variance {:.3}, KS D = {:.4}, p = {:.3}",
        report.mean,
        report.variance,
        report.ks_statistic.unwrap_or(f64::NAN),
        report.ks_pvalue.unwrap_or(f64::NAN)
    );
    for (z, density, phi) in standardized_histogram(&report.per_trial, 16)? {
        let bar = "#".repeat((density * 100.0).round() as usize);
        println!("{z:>6.2} {density:.3} ({phi:.3}) {bar}");
    }
    Ok(())
}
