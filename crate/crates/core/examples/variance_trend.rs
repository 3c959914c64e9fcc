//! Sample variance of the root count in `[-R, R]` divided by `2R`, next to
//! the asymptotic constant `K` and the finite-R prediction.

use rootlab::ensemble::{EnsembleSpec, Family};
use rootlab::kacrice::{constant_k, predicted_variance};
use rootlab::montecarlo::{run_count_experiment, ExperimentConfig};
use rootlab::rootcount::TestFunction;

fn main() -> rootlab::Result<()> {
    let k = constant_k(10.0, 1e-7)?.value;
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    println!("K = {k:.6}");
    println!("{:>4} {:>6} {:>10} {:>10} {:>10} {:>8}", "R", "n", "Var/2R", "±", "predicted", "secs");
    for scale in [20.0, 40.0, 60.0] {
        let degree = EnsembleSpec::series_like(scale).degree.max(if scale >= 40.0 { 3000 } else { 0 });
        let spec = EnsembleSpec::new(Family::Weyl, degree)?;
        let h = TestFunction::unit_box();
        let report = run_count_experiment(&ExperimentConfig::new(spec, h.clone(), scale, trials, 5))?;
        let ratio = report.variance / (2.0 * scale);
        let se = ratio * (2.0 / (trials as f64 - 1.0)).sqrt();
        let pred = predicted_variance(&h, scale)? / (2.0 * scale);
        println!(
            "{scale:>4} {degree:>6} {ratio:>10.5} {se:>10.5} {pred:>10.5} {:>8.1}",
            report.runtime_seconds
        );
    }
    Ok(())
}
