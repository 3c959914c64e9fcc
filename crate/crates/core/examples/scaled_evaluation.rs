//! Overflow-free evaluation of a degree-4000 Weyl polynomial. The raw terms
//! span thousands of orders of magnitude; the normalized value `e^{-x²/2} P(x)`
//! stays of order one inside the bulk.

use rootlab::ensemble::{EnsembleSpec, Family};

fn main() -> rootlab::Result<()> {
    let sample = EnsembleSpec::new(Family::Weyl, 4000)?.build()?.sample(7, 0);
    println!("{:>8} {:>5} {:>14} {:>12}", "x", "sign", "ln|q(x)|", "ln|P(x)|");
    for x in [0.0, 1.0, 10.0, 40.0, 63.0, 70.0, -55.5] {
        let v = sample.evaluate_scaled(x)?;
        println!("{x:>8} {:>5} {:>14.6} {:>12.3}", v.sign, v.logmag, v.logmag + 0.5 * x * x);
    }
    Ok(())
}
