mod common;

use proptest::prelude::*;
use rootlab::ensemble::*;
use rootlab::Error;

fn uniforms(seed: u64) -> impl FnMut() -> f64 {
    let mut s = GaussianStream::new(seed, u64::MAX);
    move || s.next_uniform()
}

#[test]
fn weight_examples() {
    assert_eq!(deterministic_weight(Family::Weyl, 0, 5).unwrap(), 1.0);
    let w = deterministic_weight(Family::Weyl, 4, 5).unwrap();
    assert!((w - 1.0 / 24f64.sqrt()).abs() < 1e-15);
    let w = deterministic_weight(Family::Kostlan, 2, 4).unwrap();
    assert!((w - 6f64.sqrt()).abs() < 1e-15);
    assert_eq!(deterministic_weight(Family::Kac, 7, 9).unwrap(), 1.0);
    for family in [Family::Weyl, Family::Kac, Family::Kostlan] {
        assert!(matches!(deterministic_weight(family, 6, 5), Err(Error::Domain(_))));
        assert!(matches!(log_weight(family, 6, 5), Err(Error::Domain(_))));
    }
}

#[test]
fn weights_are_positive_and_weyl_ratios_exact() {
    for family in [Family::Weyl, Family::Kac, Family::Kostlan] {
        for n in [0usize, 1, 7, 60, 170] {
            for k in 0..=n {
                assert!(deterministic_weight(family, k, n).unwrap() > 0.0);
            }
        }
    }
    for k in 0..170 {
        let a = deterministic_weight(Family::Weyl, k, 200).unwrap();
        let b = deterministic_weight(Family::Weyl, k + 1, 200).unwrap();
        let want = 1.0 / ((k + 1) as f64).sqrt();
        assert!((b / a / want - 1.0).abs() < 1e-14, "k={k}");
    }
}

#[test]
fn tabulated_log_weights_match_closed_form() {
    let ens = EnsembleSpec::new(Family::Kostlan, 3000).unwrap().build().unwrap();
    for k in [0usize, 1, 17, 1500, 2999, 3000] {
        let want = log_weight(Family::Kostlan, k, 3000).unwrap();
        assert!((ens.log_weight(k).unwrap() - want).abs() < 1e-9 * (1.0 + want.abs()));
    }
    assert!(ens.log_weight(3001).is_err());
}

#[test]
fn kostlan_degree_guard() {
    assert!(EnsembleSpec::new(Family::Kostlan, MAX_KOSTLAN_DEGREE).is_ok());
    assert!(matches!(
        EnsembleSpec::new(Family::Kostlan, MAX_KOSTLAN_DEGREE + 1),
        Err(Error::Domain(_))
    ));
}

#[test]
fn sampling_is_deterministic_and_separated() {
    let spec = EnsembleSpec::new(Family::Weyl, 30).unwrap();
    let a = sample_coefficients(spec, 1, 0).unwrap();
    let b = sample_coefficients(spec, 1, 0).unwrap();
    let c = sample_coefficients(spec, 1, 1).unwrap();
    assert_eq!(a.xi().len(), 31);
    assert_eq!(
        a.xi().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        b.xi().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
    assert_ne!(a.xi(), c.xi());
    assert_eq!(a.seed_tag(), Some(SeedTag { seed: 1, trial_index: 0 }));
}

#[test]
fn pooled_draws_are_standard_normal() {
    let spec = EnsembleSpec::new(Family::Kac, 999).unwrap();
    let draws: Vec<f64> = (0..100)
        .flat_map(|t| sample_coefficients(spec, 42, t).unwrap().xi().to_vec())
        .collect();
    assert_eq!(draws.len(), 100_000);
    let m = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / m;
    let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    assert!(mean.abs() < 0.02, "mean {mean}");
    assert!((var - 1.0).abs() < 0.02, "variance {var}");
}

fn unit_sample(family: Family, n: usize, j: usize) -> CoefficientSample {
    let mut xi = vec![0.0; n + 1];
    xi[j] = 1.0;
    EnsembleSpec::new(family, n).unwrap().build().unwrap().sample_from_xi(xi).unwrap()
}

#[test]
fn evaluate_scaled_examples() {
    let v = unit_sample(Family::Weyl, 6, 0).evaluate_scaled(0.0).unwrap();
    assert_eq!(v.sign, 1);
    assert!(v.logmag.abs() < 1e-15);
    let v = unit_sample(Family::Weyl, 6, 1).evaluate_scaled(-2.0).unwrap();
    assert_eq!(v.sign, -1);
    assert!((v.logmag - (2f64.ln() - 2.0)).abs() < 1e-14);
    assert!(matches!(
        unit_sample(Family::Kac, 3, 0).evaluate_scaled(f64::NAN),
        Err(Error::Domain(_))
    ));
    let v = unit_sample(Family::Kostlan, 4, 2).evaluate_scaled(1.0).unwrap();
    // √6 · 1 / 2^2
    assert!((v.logmag - (6f64.sqrt() / 4.0).ln()).abs() < 1e-14);
}

#[test]
fn signed_log_value_algebra() {
    let a = SignedLogValue::from_f64(-3.0);
    let b = SignedLogValue::from_f64(0.5);
    let p = a * b;
    assert_eq!(p.sign, -1);
    assert!((p.to_f64() + 1.5).abs() < 1e-15);
    assert_eq!((a * SignedLogValue::ZERO).sign, 0);
    assert_eq!((-a).sign, 1);
    // ln/exp round trip: a few ulps of the log, scaled by |ln v|.
    for v in [1e-300, 0.1, 7.0, -2.5e200] {
        let back = SignedLogValue::from_f64(v).to_f64();
        assert!((back / v - 1.0).abs() <= 4.0 * f64::EPSILON * (1.0 + v.abs().ln().abs()));
    }
    assert_eq!(SignedLogValue::from_f64(1.0).to_f64(), 1.0);
}

#[test]
fn degree_2000_weyl_at_forty_matches_oracle() {
    let ens = EnsembleSpec::new(Family::Weyl, 2000).unwrap().build().unwrap();
    let weights = common::weights(Family::Weyl, 2000);
    let mut checked = 0;
    for trial in 0..100 {
        let s = ens.sample(2024, trial);
        let got = s.evaluate_scaled(40.0).unwrap();
        assert!(got.logmag.is_finite());
        let (exact, abs) = common::evaluate(&weights, s.xi(), 40.0);
        if exact.abs().ln_abs() - abs.ln_abs() < -20.0 {
            continue;
        }
        checked += 1;
        assert_eq!(i32::from(got.sign), exact.signum(), "trial {trial}");
        assert_eq!(s.sign_at(40.0), got.sign, "trial {trial}");
        let want = exact.ln_abs() - 800.0;
        assert!((got.logmag - want).abs() < 1e-9, "trial {trial}: {} vs {want}", got.logmag);
    }
    assert!(checked >= 95, "only {checked} well-conditioned probes");
}

fn log_normalizer(family: Family, n: usize, x: f64) -> f64 {
    match family {
        Family::Weyl => -0.5 * x * x,
        Family::Kac => 0.0,
        Family::Kostlan => -0.5 * n as f64 * x.ln_1p_sq(),
    }
}

trait Ln1pSq {
    fn ln_1p_sq(self) -> f64;
}

impl Ln1pSq for f64 {
    fn ln_1p_sq(self) -> f64 {
        (self * self).ln_1p()
    }
}

#[test]
fn sign_agreement_with_oracle_per_family() {
    let degrees = [3usize, 20, 100, 500, 1500, 4000];
    let probes_per_degree = [250usize, 250, 200, 150, 100, 50];
    for family in [Family::Weyl, Family::Kac, Family::Kostlan] {
        let mut u = uniforms(family as u64 + 7);
        let mut total = 0;
        let mut skipped = 0;
        for (&n, &probes) in degrees.iter().zip(&probes_per_degree) {
            let ens = EnsembleSpec::new(family, n).unwrap().build().unwrap();
            let weights = common::weights(family, n);
            let reach = match family {
                Family::Weyl => (n as f64).sqrt() + 5.0,
                Family::Kac => 1.5,
                Family::Kostlan => 4.0,
            };
            for p in 0..probes {
                total += 1;
                let s = ens.sample(99, p as u64);
                let x = reach * (2.0 * u() - 1.0);
                let (exact, abs) = common::evaluate(&weights, s.xi(), x);
                if exact.is_zero() || exact.abs().ln_abs() - abs.ln_abs() < -20.0 {
                    skipped += 1;
                    continue;
                }
                let got = s.evaluate_scaled(x).unwrap();
                assert_eq!(i32::from(got.sign), exact.signum(), "{family} n={n} x={x}");
                assert_eq!(s.sign_at(x), got.sign, "{family} n={n} x={x} (pruned)");
                let want = exact.ln_abs() + log_normalizer(family, n, x);
                assert!(
                    (got.logmag - want).abs() < 1e-9 * (1.0 + want.abs()),
                    "{family} n={n} x={x}: {} vs {want}",
                    got.logmag
                );
            }
        }
        assert_eq!(total, 1000);
        assert!(skipped < 10, "{family}: {skipped} near-cancelling probes");
    }
}

#[test]
fn kernel_jet_examples() {
    let j = kernel_jet(&KernelSource::WeylSeries, 0.0, 0.0).unwrap();
    assert_eq!((j.k, j.k_s, j.k_t, j.k_st), (1.0, 0.0, 0.0, 1.0));
    let weyl = KernelSource::Finite(EnsembleSpec::new(Family::Weyl, 2000).unwrap().build().unwrap());
    let j = kernel_jet(&weyl, 1.0, 2.0).unwrap();
    let e2 = 2f64.exp();
    assert!((j.k / e2 - 1.0).abs() < 1e-12);
    assert!((j.k_s / (2.0 * e2) - 1.0).abs() < 1e-12);
    assert!((j.k_t / e2 - 1.0).abs() < 1e-12);
    assert!((j.k_st / (3.0 * e2) - 1.0).abs() < 1e-12);
    let kac = KernelSource::Finite(EnsembleSpec::new(Family::Kac, 3).unwrap().build().unwrap());
    assert!((kernel_jet(&kac, 1.0, 1.0).unwrap().k - 4.0).abs() < 1e-14);
    assert!(matches!(
        kernel_jet(&KernelSource::WeylSeries, 40.0, 40.0),
        Err(Error::Range { .. })
    ));
}

#[test]
fn truncated_weyl_jet_matches_series_in_range() {
    let n = 2500;
    let weyl = KernelSource::Finite(EnsembleSpec::new(Family::Weyl, n).unwrap().build().unwrap());
    let reach = (n as f64 - 40.0 * (n as f64).sqrt()).sqrt();
    let mut u = uniforms(3);
    for _ in 0..200 {
        let s = reach * (2.0 * u() - 1.0);
        let t = reach * (2.0 * u() - 1.0);
        let a = weyl.scaled_jet(s, t).unwrap();
        let b = KernelSource::WeylSeries.scaled_jet(s, t).unwrap();
        // Errors are measured against the absolute series `e^{|st|}`, which
        // bounds the rounding error of the alternating sum when `st < 0`.
        let st_abs = s.abs() * t.abs();
        let fa = (a.log_scale - st_abs).exp();
        let fb = (b.log_scale - st_abs).exp();
        let rel = |x: f64, y: f64, scale: f64| (x * fa - y * fb).abs() / scale;
        let norm = 1.0 + s.abs() * t.abs();
        assert!(rel(a.k, b.k, 1.0) < 1e-12, "K at ({s}, {t})");
        assert!(rel(a.k_s, b.k_s, norm) < 1e-12, "K_s at ({s}, {t})");
        assert!(rel(a.k_t, b.k_t, norm) < 1e-12, "K_t at ({s}, {t})");
        assert!(rel(a.k_st, b.k_st, norm) < 1e-12, "K_st at ({s}, {t})");
    }
}

#[test]
fn diagonal_cauchy_schwarz_million_probes() {
    let mut u = uniforms(11);
    let sources: Vec<(Family, KernelSource)> = [(Family::Weyl, 40), (Family::Kac, 25), (Family::Kostlan, 30)]
        .iter()
        .map(|&(f, n)| (f, KernelSource::Finite(EnsembleSpec::new(f, n).unwrap().build().unwrap())))
        .chain(std::iter::once((Family::Weyl, KernelSource::WeylSeries)))
        .collect();
    for i in 0..1_000_000usize {
        let (family, src) = &sources[i % sources.len()];
        let reach = match family {
            Family::Weyl => 12.0,
            Family::Kac => 3.0,
            Family::Kostlan => 10.0,
        };
        let t = reach * (2.0 * u() - 1.0);
        let d = src.diagonal(t).unwrap();
        assert!(d.a > 0.0, "{family} t={t}");
        assert!(d.disc >= 0.0, "{family} t={t}");
        let j = src.scaled_jet(t, t).unwrap();
        assert!(j.k * j.k_st - j.k_s * j.k_s >= -1e-12 * j.k * j.k_st, "{family} t={t}");
    }
}

proptest! {
    #[test]
    fn jet_is_symmetric(n in 0usize..80, fam in 0u8..3, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let family = [Family::Weyl, Family::Kac, Family::Kostlan][fam as usize];
        let src = KernelSource::Finite(EnsembleSpec::new(family, n).unwrap().build().unwrap());
        let a = kernel_jet(&src, s, t).unwrap();
        let b = kernel_jet(&src, t, s).unwrap();
        let tol = 1e-12 * (a.k.abs() + a.k_s.abs() + a.k_t.abs() + a.k_st.abs() + 1e-300);
        prop_assert!((a.k - b.k).abs() <= tol);
        prop_assert!((a.k_s - b.k_t).abs() <= tol);
        prop_assert!((a.k_st - b.k_st).abs() <= tol);
    }

    #[test]
    fn evaluation_is_positively_homogeneous(
        n in 0usize..300, fam in 0u8..3, seed in any::<u64>(),
        x in -8.0f64..8.0, log_lambda in -30.0f64..30.0,
    ) {
        let family = [Family::Weyl, Family::Kac, Family::Kostlan][fam as usize];
        let ens = EnsembleSpec::new(family, n).unwrap().build().unwrap();
        let s = ens.sample(seed, 0);
        let lambda = log_lambda.exp();
        let scaled = ens.sample_from_xi(s.xi().iter().map(|v| v * lambda).collect()).unwrap();
        let a = s.evaluate_scaled(x).unwrap();
        let b = scaled.evaluate_scaled(x).unwrap();
        prop_assert_eq!(a.sign, b.sign);
        if a.sign != 0 {
            let tol = 1e-9 * (1.0 + a.logmag.abs());
            prop_assert!((b.logmag - a.logmag - lambda.ln()).abs() <= tol.max(1e-9));
        }
    }

    #[test]
    fn sample_regenerates_bit_exactly(seed in any::<u64>(), trial in any::<u64>(), n in 0usize..50) {
        let spec = EnsembleSpec::new(Family::Weyl, n).unwrap();
        let a = sample_coefficients(spec, seed, trial).unwrap();
        let b = sample_coefficients(spec, seed, trial).unwrap();
        prop_assert_eq!(a.xi().len(), n + 1);
        prop_assert!(a.xi().iter().zip(b.xi()).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}
