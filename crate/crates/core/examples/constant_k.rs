//! The variance constant `K = 1/π + ∫(ρ(0,t) - 1/π²) dt` with a certified
//! error bound, and the finite-R variance it predicts.

use rootlab::kacrice::{constant_k, k_hat_zero, predicted_variance};
use rootlab::rootcount::TestFunction;

fn main() -> rootlab::Result<()> {
    let k = constant_k(10.0, 1e-9)?;
    println!("K             = {:.15}", k.value);
    println!("quadrature    ± {:.1e}", k.quadrature_error);
    println!("tail bound    ± {:.1e}", k.tail_bound);
    println!("k̂(0) over ℝ  = {:.15}", k_hat_zero()?);
    let h = TestFunction::unit_box();
    for scale in [5.0, 20.0, 80.0] {
        let v = predicted_variance(&h, scale)?;
        println!("R = {scale:>4}: Var n(R, 1_[-1,1]) ≈ {v:.5}  (Var/2R = {:.5})", v / (2.0 * scale));
    }
    Ok(())
}
