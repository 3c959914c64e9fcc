//! Two-point correlation of the limiting Weyl zeros: closed form, an
//! independent quadrature of the same Kac–Rice expectation, and the
//! normalized clustering function.

use rootlab::kacrice::{clustering_function, pair_correlation_closed, pair_correlation_numeric};

fn main() -> rootlab::Result<()> {
    println!("{:>5} {:>20} {:>20} {:>12}", "t", "rho closed", "rho numeric", "rho·π² - 1");
    for t in [0.01, 0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0] {
        let closed = pair_correlation_closed(t).value;
        let numeric = pair_correlation_numeric(t)?.value;
        println!("{t:>5} {closed:>20.15} {numeric:>20.15} {:>12.3e}", clustering_function(t));
    }
    Ok(())
}
