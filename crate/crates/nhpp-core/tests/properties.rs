//! Property-based invariants over randomized specs.

use proptest::prelude::*;

use nhpp_core::validation::wasserstein1_empirical;
use nhpp_core::{
    batch, general, majorizer, special, CumulativeIntensity, IntensitySpec, Interval, RngStream,
    SamplerOptions,
};

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn step_outputs_sorted_and_contained(
        seed in any::<u64>(),
        values in prop::collection::vec(0.0f64..3.0, 1..6),
        a in -5.0f64..5.0,
        width in 0.1f64..8.0,
    ) {
        let interval = iv(a, a + width);
        let mut s = RngStream::new(seed);
        let series = special::draw_step_regular(&mut s, &values, interval, SamplerOptions::DEFAULT)
            .unwrap();
        prop_assert!(series.times().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(series.times().iter().all(|&t| interval.contains(t)));
    }

    #[test]
    fn option_contracts_hold_for_random_specs(
        seed in any::<u64>(),
        values in prop::collection::vec(0.05f64..2.0, 1..5),
        k in 1usize..4,
    ) {
        let interval = iv(0.0, 3.0);
        let mut s = RngStream::new(seed);
        let capped = special::draw_step_regular(
            &mut s,
            &values,
            interval,
            SamplerOptions { at_most_k: Some(k), ..SamplerOptions::DEFAULT },
        )
        .unwrap();
        prop_assert!(capped.len() <= k);
        let zt = special::draw_step_regular(
            &mut s,
            &values,
            interval,
            SamplerOptions::at_least_one(),
        )
        .unwrap();
        prop_assert!(!zt.is_empty());
        let one = special::draw_step_regular(
            &mut s,
            &values,
            interval,
            SamplerOptions::exactly_one(),
        )
        .unwrap();
        prop_assert_eq!(one.len(), 1);
    }

    #[test]
    fn monotone_majorizer_dominates(
        anchors in prop::collection::vec(0.0f64..4.0, 3..8),
        bins in 2usize..10,
    ) {
        // An increasing piecewise-linear function from sorted anchors.
        let mut levels = anchors;
        levels.sort_unstable_by(f64::total_cmp);
        let n = levels.len();
        let f = move |t: f64| {
            let pos = t.clamp(0.0, 1.0) * (n - 1) as f64;
            let i = (pos as usize).min(n - 2);
            let frac = pos - i as f64;
            levels[i] * (1.0 - frac) + levels[i + 1] * frac
        };
        let breaks: Vec<f64> = (0..=bins).map(|i| i as f64 / bins as f64).collect();
        let spec = majorizer::step_majorizer(&f, &breaks, true, None).unwrap();
        for cell in 0..bins {
            for j in 0..=50 {
                let t = breaks[cell] + (breaks[cell + 1] - breaks[cell]) * j as f64 / 50.0;
                prop_assert!(spec.values()[cell] >= f(t) - 1e-12);
            }
        }
    }

    #[test]
    fn lipschitz_majorizer_dominates(
        amp in 0.1f64..3.0,
        freq in 0.1f64..4.0,
        bins in 2usize..12,
    ) {
        // amp * (1 + sin(freq t)) has |derivative| <= amp * freq.
        let f = move |t: f64| amp * (1.0 + libm::sin(freq * t));
        let k = amp * freq;
        let breaks: Vec<f64> = (0..=bins).map(|i| 6.0 * i as f64 / bins as f64).collect();
        let spec = majorizer::step_majorizer(&f, &breaks, false, Some(k)).unwrap();
        for cell in 0..bins {
            for j in 0..=200 {
                let t = breaks[cell] + (breaks[cell + 1] - breaks[cell]) * j as f64 / 200.0;
                prop_assert!(spec.values()[cell] >= f(t) - 1e-12);
            }
        }
    }

    #[test]
    fn inversion_roundtrip_on_random_steps(
        values in prop::collection::vec(0.0f64..3.0, 1..7),
        probes in prop::collection::vec(0.0f64..1.0, 10),
    ) {
        prop_assume!(values.iter().sum::<f64>() > 0.0);
        let interval = iv(0.0, values.len() as f64);
        let spec = IntensitySpec::step_regular(values, interval).unwrap();
        let cum = CumulativeIntensity::from_spec(&spec, interval).unwrap();
        for &u in &probes {
            let z = u * cum.mass();
            let t = cum.invert(z).unwrap();
            prop_assert!((cum.value(t) - z).abs() <= 1e-10 * z.abs().max(1.0));
        }
    }

    #[test]
    fn numeric_and_analytic_inverses_agree_on_random_log_linear(
        alpha in -1.0f64..1.5,
        beta in -0.5f64..0.5,
        probes in prop::collection::vec(0.001f64..0.999, 8),
    ) {
        let interval = iv(0.0, 4.0);
        let spec = IntensitySpec::log_linear(alpha, beta).unwrap();
        let analytic = CumulativeIntensity::from_spec(&spec, interval).unwrap();
        let numeric = CumulativeIntensity::from_fn(
            move |t: f64| {
                if beta.abs() < 1e-12 {
                    libm::exp(alpha) * (t.clamp(0.0, 4.0))
                } else {
                    (libm::exp(alpha + beta * t.clamp(0.0, 4.0)) - libm::exp(alpha)) / beta
                }
            },
            interval,
        )
        .unwrap();
        for &u in &probes {
            let z = u * analytic.mass();
            let ta = analytic.invert(z).unwrap();
            let tn = numeric.invert(z).unwrap();
            prop_assert!((ta - tn).abs() < 1e-6, "z = {}: {} vs {}", z, ta, tn);
        }
    }

    #[test]
    fn w1_is_a_metric_on_empirical_samples(
        a in prop::collection::vec(-10.0f64..10.0, 1..20),
        b in prop::collection::vec(-10.0f64..10.0, 1..20),
        c in prop::collection::vec(-10.0f64..10.0, 1..20),
    ) {
        let dab = wasserstein1_empirical(&a, &b).unwrap();
        let dba = wasserstein1_empirical(&b, &a).unwrap();
        prop_assert!((dab - dba).abs() < 1e-12);
        prop_assert!(wasserstein1_empirical(&a, &a).unwrap() < 1e-12);
        let dac = wasserstein1_empirical(&a, &c).unwrap();
        let dcb = wasserstein1_empirical(&c, &b).unwrap();
        prop_assert!(dab <= dac + dcb + 1e-9);
    }

    #[test]
    fn batch_rows_respect_shape_invariants(
        seed in any::<u64>(),
        rows in 1usize..6,
        values in prop::collection::vec(0.0f64..2.0, 1..5),
    ) {
        let interval = iv(1.0, 4.0);
        let cols = values.len();
        let mut data = Vec::new();
        for _ in 0..rows {
            data.extend_from_slice(&values);
        }
        let rates = batch::RateMatrix::new(rows, cols, data, interval).unwrap();
        let mut s = RngStream::new(seed);
        let m = batch::draw_step_regular_batch(&mut s, &rates, SamplerOptions::DEFAULT).unwrap();
        prop_assert_eq!(m.rows(), rows);
        for i in 0..rows {
            let row = m.row_events(i);
            prop_assert!(row.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(row.iter().all(|&t| interval.contains(t)));
            let padded = m.row_padded(i);
            prop_assert!(padded[row.len()..].iter().all(|v| v.is_nan()));
        }
    }

    #[test]
    fn thinning_never_returns_events_where_lambda_dominates_bound(
        seed in any::<u64>(),
        level in 0.2f64..2.0,
    ) {
        // lambda is half the bound: every accepted event is a proposal and
        // the trace never violates.
        let interval = iv(0.0, 5.0);
        let maj = IntensitySpec::step_regular(vec![level], interval).unwrap();
        let mut s = RngStream::new(seed);
        let (series, stats) = general::draw_thinning_traced(
            &mut s,
            |_| level / 2.0,
            &maj,
            interval,
            SamplerOptions::DEFAULT,
        )
        .unwrap();
        prop_assert!(series.len() as u64 == stats.accepted);
        prop_assert!(stats.accepted <= stats.proposals);
    }
}
