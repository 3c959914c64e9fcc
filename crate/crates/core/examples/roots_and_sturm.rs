//! Real roots of one sampled polynomial: grid scan with bisection, checked
//! against an exact Sturm count.

use rootlab::ensemble::{EnsembleSpec, Family};
use rootlab::rootcount::{min_gap, real_roots, sturm_count, DEFAULT_GRID_STEP, DEFAULT_REFINEMENT_TOL};

fn main() -> rootlab::Result<()> {
    for family in [Family::Kac, Family::Weyl, Family::Kostlan] {
        let ensemble = EnsembleSpec::new(family, 40)?.build()?;
        let sample = ensemble.sample(2024, 0);
        let window = (-8.0, 8.0);
        let roots = real_roots(&sample, window, DEFAULT_GRID_STEP, DEFAULT_REFINEMENT_TOL)?;
        let exact = sturm_count(&sample.power_coefficients()?, window)?;
        println!("{family:<8} degree 40 on [-8, 8]: {} roots (Sturm: {exact})", roots.len());
        let shown: Vec<String> = roots.roots.iter().map(|r| format!("{r:.6}")).collect();
        println!("         {}", shown.join(" "));
        println!("         min gap {:.4}", min_gap(&roots));
    }
    Ok(())
}
