//! Monte Carlo mean root count of a Weyl polynomial against the Kac–Rice
//! quadrature.

use rootlab::ensemble::{EnsembleSpec, Family, KernelSource};
use rootlab::kacrice::expected_count_quadrature;
use rootlab::montecarlo::{run_count_experiment, ExperimentConfig};
use rootlab::rootcount::TestFunction;

fn main() -> rootlab::Result<()> {
    let spec = EnsembleSpec::new(Family::Weyl, 400)?;
    let config = ExperimentConfig::new(spec, TestFunction::unit_box(), 20.0, 2000, 1);
    let report = run_count_experiment(&config)?;
    let exact = expected_count_quadrature(&KernelSource::Finite(spec.build()?), (-20.0, 20.0))?;
    println!("trials           {}", config.trials);
    println!("mean count       {:.4} ± {:.4}", report.mean, report.stderr);
    println!("Kac–Rice E N     {:.4}", exact.value);
    println!("(2/π)·20         {:.4}", 40.0 / std::f64::consts::PI);
    println!("variance         {:.4}", report.variance);
    println!("runtime          {:.1} s", report.runtime_seconds);
    Ok(())
}
