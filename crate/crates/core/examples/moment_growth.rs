//! Moments of the linear statistic `n(R, h)` scaled by `R^k`, with a
//! Kendall-tau test for an upward trend.

use rootlab::montecarlo::moment_growth_check;
use rootlab::rootcount::TestFunction;

fn main() -> rootlab::Result<()> {
    let table = moment_growth_check(&TestFunction::abs(), &[5.0, 10.0, 20.0, 30.0], 400, 6, 1)?;
    println!("{:>4} {:>6} {:>9} {:>9} {:>9} {:>9}", "R", "n", "k=1", "k=2", "k=3", "k=4");
    for row in &table.rows {
        let r = row.ratios;
        println!("{:>4} {:>6} {:>9.5} {:>9.5} {:>9.5} {:>9.5}", row.scale, row.degree, r[0], r[1], r[2], r[3]);
    }
    println!("tau      {:?}", table.kendall_tau);
    println!("bounded  {:?}", table.bounded);
    println!("‖h‖₁/π = {:.5}", 1.0 / std::f64::consts::PI);
    Ok(())
}
