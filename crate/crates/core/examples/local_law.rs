//! Largest number of roots in unit subintervals of the bulk over many
//! samples, and the largest total count in the bulk window.

use rootlab::ensemble::{EnsembleSpec, Family};
use rootlab::montecarlo::{local_law_check, ExperimentConfig};
use rootlab::rootcount::TestFunction;

fn main() -> rootlab::Result<()> {
    let config = ExperimentConfig::new(EnsembleSpec::new(Family::Weyl, 400)?, TestFunction::unit_box(), 1.0, 500, 9);
    for length in [1.0, 2.0, 5.0] {
        let t = local_law_check(&config, length)?;
        println!(
            "ℓ = {length}: max count {} (threshold 3ℓ/π = {:.2}, exceeded in {:.3}% of pieces)",
            t.overall_max,
            t.threshold,
            100.0 * t.exceedance_fraction
        );
    }
    let t = local_law_check(&config, 1.0)?;
    let row: Vec<String> = t.max_counts.iter().map(|c| c.to_string()).collect();
    println!("per-piece maxima on {:?}: {}", t.window, row.join(""));
    println!("largest total: {}", t.max_total);
    Ok(())
}
