//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails. Tolerances and seeds are fixed here.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rootlab::ensemble::{EnsembleSpec, Family, KernelSource};
use rootlab::kacrice::*;
use rootlab::montecarlo::*;
use rootlab::partitions::*;
use rootlab::rootcount::*;

/// Reference value of the variance constant.
const K_REF: f64 = 0.18198;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> rootlab::Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = rootlab::cli::run(std::iter::once("rootlab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn c1_constant_k() -> rootlab::Result<Outcome> {
    let (code, out) = cli(&["constant-k"]);
    let value: f64 = out
        .trim()
        .strip_prefix("K=")
        .and_then(|s| s.split_once(' '))
        .and_then(|(v, _)| v.parse().ok())
        .unwrap_or(f64::NAN);
    let lib = constant_k(10.0, 1e-7)?;
    let pass = code == 0 && (value - K_REF).abs() < 5e-4 && (lib.value - value).abs() < 1e-12;
    outcome(pass, format!("stdout '{}', |K - {K_REF}| = {:.2e} (tol 5e-4)", out.trim(), (value - K_REF).abs()))
}

fn c2_closed_vs_numeric() -> rootlab::Result<Outcome> {
    let mut worst: f64 = 0.0;
    for t in [0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        let d = (pair_correlation_closed(t).value - pair_correlation_numeric(t)?.value).abs();
        worst = worst.max(d);
    }
    outcome(worst < 1e-6, format!("max |closed - numeric| = {worst:.2e} (tol 1e-6)"))
}

fn c3_kpoint() -> rootlab::Result<Outcome> {
    let src = KernelSource::WeylSeries;
    let mut worst2: f64 = 0.0;
    for t in [0.3, 1.0, 2.5] {
        let r = kpoint_correlation(&[0.0, t], &src, DEFAULT_QMC_BUDGET)?;
        worst2 = worst2.max((r.value - pair_correlation_closed(t).value).abs());
    }
    let mut worst3: f64 = 0.0;
    for (pair, far) in [((0.0, 1.0), 9.0), ((-0.5, 0.7), -8.0), ((0.0, 2.0), 10.0)] {
        let r3 = kpoint_correlation(&[pair.0, pair.1, far], &src, DEFAULT_QMC_BUDGET)?.value;
        let r2 = pair_correlation_closed(pair.1 - pair.0).value;
        worst3 = worst3.max((r3 / (r2 / PI) - 1.0).abs());
    }
    outcome(
        worst2 < 1e-6 && worst3 < 1e-3,
        format!("k=2 max error {worst2:.2e} (tol 1e-6); k=3 factorization max |ratio-1| {worst3:.2e} (tol 1e-3)"),
    )
}

fn c4_mean_count() -> rootlab::Result<Outcome> {
    let spec = EnsembleSpec::new(Family::Weyl, 400)?;
    let cfg = ExperimentConfig::new(spec, TestFunction::unit_box(), 20.0, 2000, 1).with_workers(workers());
    let report = run_count_experiment(&cfg)?;
    let quad = expected_count_quadrature(&KernelSource::Finite(spec.build()?), (-20.0, 20.0))?.value;
    let asym = 2.0 / PI * 20.0;
    let dev = (report.mean - quad).abs() / report.stderr;
    let rel = (quad / asym - 1.0).abs();
    outcome(
        dev < 3.0 && rel < 0.02,
        format!(
            "MC mean {:.4} ± {:.4}, quadrature {quad:.4} ({dev:.2} stderr, tol 3); quadrature vs 40/π off by {:.2}% (tol 2%)",
            report.mean,
            report.stderr,
            100.0 * rel
        ),
    )
}

fn c5_variance_trend() -> rootlab::Result<Outcome> {
    let k = constant_k(10.0, 1e-7)?.value;
    let mut ratios = Vec::new();
    for scale in [20.0, 40.0, 60.0] {
        let degree = series_like_degree_for(scale);
        let spec = EnsembleSpec::new(Family::Weyl, degree)?;
        let cfg = ExperimentConfig::new(spec, TestFunction::unit_box(), scale, 2000, 5).with_workers(workers());
        let r = run_count_experiment(&cfg)?;
        ratios.push(r.variance / (2.0 * scale));
    }
    let banded = (0.7 * k..=1.3 * k).contains(&ratios[2]);
    let increasing = ratios.windows(2).all(|w| w[0] < w[1]);
    outcome(
        banded && increasing,
        format!(
            "Var/2R at R=20,40,60: {:.5}, {:.5}, {:.5}; band [{:.4}, {:.4}] at R=60: {banded}; increasing: {increasing}",
            ratios[0],
            ratios[1],
            ratios[2],
            0.7 * k,
            1.3 * k
        ),
    )
}

/// Truncation degree: the series-like rule, at least 3000 from R = 40 on.
fn series_like_degree_for(scale: f64) -> usize {
    let n = EnsembleSpec::series_like(scale).degree;
    if scale >= 40.0 {
        n.max(3000)
    } else {
        n
    }
}

fn c6_clt() -> rootlab::Result<Outcome> {
    let spec = EnsembleSpec::new(Family::Weyl, series_like_degree_for(40.0))?;
    let mut pvalues = Vec::new();
    for seed in 1..=5u64 {
        let cfg = ExperimentConfig::new(spec, TestFunction::unit_box(), 40.0, 2000, seed).with_workers(workers());
        let r = clt_experiment(&cfg)?;
        pvalues.push(r.ks_pvalue.unwrap_or(0.0));
    }
    let passing = pvalues.iter().filter(|p| **p > 0.01).count();
    let list: Vec<String> = pvalues.iter().map(|p| format!("{p:.3}")).collect();
    outcome(passing >= 4, format!("KS p-values for seeds 1..5: [{}]; {passing}/5 above 0.01 (need 4)", list.join(", ")))
}

fn c7_pair_correlation() -> rootlab::Result<Outcome> {
    let cfg = ExperimentConfig::new(EnsembleSpec::series_like(20.0), TestFunction::unit_box(), 20.0, 2000, 11)
        .with_workers(workers());
    let table = empirical_pair_correlation(&cfg, 4.0, 0.05)?;
    let frac = table.fraction_within(3.0);
    let first = table.bins[0].estimate;
    outcome(
        frac >= 0.9 && first < 0.02,
        format!("{:.1}% of {} bins within 3 stderr (need 90%); first bin {first:.5} (need < 0.02)", 100.0 * frac, table.bins.len()),
    )
}

fn c8_kac_log_law() -> rootlab::Result<Outcome> {
    let (code, out) = cli(&["kac-expected", "--degree", "100"]);
    let env: rootlab::cli::OutputEnvelope = serde_json::from_str(&out).expect("kac-expected JSON");
    let total = env.results["expected_count"].as_f64().unwrap_or(f64::NAN);
    let c = total - 2.0 / PI * 100f64.ln();
    outcome(code == 0 && (0.55..=0.75).contains(&c), format!("E N_100 = {total:.6}, minus (2/π)ln 100 = {c:.6} (band [0.55, 0.75])"))
}

fn c9_sturm_equivalence() -> rootlab::Result<Outcome> {
    let mut mismatches = Vec::new();
    let mut total = 0;
    for (fi, family) in [Family::Kac, Family::Weyl, Family::Kostlan].into_iter().enumerate() {
        let window = match family {
            Family::Kac => (-3.0, 3.0),
            Family::Weyl => (-12.0, 12.0),
            Family::Kostlan => (-5.0, 5.0),
        };
        for i in 0..1000u64 {
            let n = 1 + (i as usize * 7919 + fi * 13) % 50;
            let s = EnsembleSpec::new(family, n)?.build()?.sample(4242 + fi as u64, i);
            let found = real_roots(&s, window, DEFAULT_GRID_STEP, DEFAULT_REFINEMENT_TOL)?.len();
            let exact = sturm_count(&s.power_coefficients()?, window)?;
            total += 1;
            if found != exact {
                mismatches.push(format!("{family} n={n} trial {i}: {found} vs {exact}"));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{} mismatches in {total} samples at grid {DEFAULT_GRID_STEP} {:?}", mismatches.len(), mismatches),
    )
}

fn bell(k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 1..k {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    *row.last().unwrap()
}

fn c10_combinatorics() -> rootlab::Result<Outcome> {
    let bell_ok = (1..=8).all(|k| enumerate_partitions(k).map(|p| p.len()) == Ok(bell(k)));
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    let mut worst_table: f64 = 0.0;
    let mut worst_moment: f64 = 0.0;
    for seed in 0..100u64 {
        let mut g = rootlab::ensemble::GaussianStream::new(seed, 9);
        let k = 2 + (seed as usize % 5);
        let t = SubsetTable::from_fn(k, |_| g.next().unwrap())?;
        let back = correlation_from_truncated(&truncated_from_correlation(&t));
        for m in 1..(1usize << k) {
            worst_table = worst_table.max(rel(back.get(m), t.get(m)));
        }
        let order = 1 + (seed as usize % 8);
        let c: Vec<f64> = (0..order).map(|_| g.next().unwrap()).collect();
        let back = cumulants_from_moments(&moments_from_cumulants(&c)?)?;
        for (a, b) in back.iter().zip(&c) {
            worst_moment = worst_moment.max(rel(*a, *b));
        }
    }
    outcome(
        bell_ok && worst_table < 1e-12 && worst_moment < 1e-12,
        format!("Bell counts k≤8: {bell_ok}; worst roundtrip error tables {worst_table:.1e}, moments {worst_moment:.1e} (tol 1e-12)"),
    )
}

fn c11_gkz() -> rootlab::Result<Outcome> {
    let grid = [-0.5, -0.3, -0.1, 0.0, 0.2, 0.4, 0.5];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=6usize {
        let src = KernelSource::Finite(EnsembleSpec::new(Family::Kac, n)?.build()?);
        for &w in &grid {
            let d = (gkz_density_oracle(n, &[w], 16)? - one_point_intensity(&src, w)?).abs();
            worst = worst.max(d);
            cases += 1;
        }
        if n < 2 {
            continue;
        }
        for (i, &a) in grid.iter().enumerate() {
            for &b in &grid[i + 1..] {
                let g = gkz_density_oracle(n, &[a, b], 16)?;
                let k = kpoint_correlation(&[a, b], &src, DEFAULT_QMC_BUDGET)?.value;
                worst = worst.max((g - k).abs());
                cases += 1;
            }
        }
    }
    outcome(worst < 1e-3, format!("{cases} (n, w) cases, max |GKZ - Kac–Rice| = {worst:.2e} (tol 1e-3)"))
}

fn c12_determinism() -> rootlab::Result<Outcome> {
    let configs = [
        ExperimentConfig::new(EnsembleSpec::new(Family::Weyl, 400)?, TestFunction::unit_box(), 20.0, 200, 7),
        ExperimentConfig::new(EnsembleSpec::new(Family::Kac, 200)?, TestFunction::indicator(-1.0, 0.5)?, 2.0, 300, 8),
        ExperimentConfig::new(EnsembleSpec::new(Family::Kostlan, 80)?, TestFunction::abs(), 4.0, 300, 9),
    ];
    let mut identical = 0;
    for cfg in &configs {
        let reports: Vec<String> = [1usize, 2, 5]
            .iter()
            .map(|&w| {
                let r = run_count_experiment(&cfg.clone().with_workers(w)).expect("experiment");
                let mut v = serde_json::to_value(&r).expect("serialize");
                v["config"]["workers"] = serde_json::Value::Null;
                serde_json::to_string(&v).expect("serialize")
            })
            .collect();
        if reports.windows(2).all(|p| p[0] == p[1]) {
            identical += 1;
        }
    }
    outcome(identical == configs.len(), format!("{identical}/{} configs byte-identical for workers 1, 2, 5", configs.len()))
}

type Criterion = (usize, &'static str, Duration, fn() -> rootlab::Result<Outcome>);

fn main() {
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let criteria: [Criterion; 12] = [
        (1, "constant K", Duration::from_secs(5), c1_constant_k),
        (2, "closed form vs numeric oracle", Duration::from_secs(10), c2_closed_vs_numeric),
        (3, "k-point consistency", Duration::from_secs(60), c3_kpoint),
        (4, "mean count", Duration::from_secs(300), c4_mean_count),
        (5, "variance trend", Duration::from_secs(1800), c5_variance_trend),
        (6, "CLT", Duration::from_secs(1800), c6_clt),
        (7, "empirical pair correlation", Duration::from_secs(600), c7_pair_correlation),
        (8, "Kac log law", Duration::from_secs(5), c8_kac_log_law),
        (9, "oracle equivalence", Duration::from_secs(120), c9_sturm_equivalence),
        (10, "exact combinatorics", Duration::from_secs(5), c10_combinatorics),
        (11, "GKZ cross-check", Duration::from_secs(120), c11_gkz),
        (12, "determinism", Duration::from_secs(300), c12_determinism),
    ];
    let mut failed = 0;
    let mut run = 0;
    for (id, name, budget, f) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        run += 1;
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= budget;
        let ok = pass && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {name}: {} — {detail} [{:.1}s, budget {}s{}]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", run - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
