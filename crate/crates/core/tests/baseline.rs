use bandlimit_core::{linear_forecast, LinearBaselineConfig, Series};
use proptest::prelude::*;

/// Secant through the two anchor points, evaluated in point-slope form.
fn secant_oracle(z: &[f64], start_t: i64, t0: i64, a: i64, horizon: i64) -> Vec<f64> {
    let z_at = |t: i64| z[(t - start_t) as usize];
    let (x0, y0) = ((t0 - a) as f64, z_at(t0 - a));
    let (x1, y1) = (t0 as f64, z_at(t0));
    (1..=horizon)
        .map(|h| {
            let x = (t0 + h) as f64;
            y1 + (y1 - y0) * (x - x1) / (x1 - x0)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matches_secant_oracle(
        values in prop::collection::vec(20.0f64..120.0, 91..200),
        start_t in -50i64..50,
        horizon in 1usize..=5,
    ) {
        let a = 90i64;
        let z = Series::new(start_t, values.clone()).unwrap();
        let t0 = z.end_t();
        let got = linear_forecast(&z, t0, &LinearBaselineConfig::new(a as usize).unwrap(), horizon).unwrap();
        let want = secant_oracle(&values, start_t, t0, a, horizon as i64);
        prop_assert_eq!(got.start_t(), t0 + 1);
        for (g, w) in got.values().iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-12 * w.abs().max(1.0), "{} vs {}", g, w);
        }
    }

    #[test]
    fn exact_on_integer_affine_data(
        slope in -20i64..20,
        intercept in -1000i64..1000,
        lookback in 1usize..30,
        horizon in 1usize..10,
    ) {
        let z = Series::new(0, (0..40).map(|t| (slope * t + intercept) as f64).collect()).unwrap();
        let f = linear_forecast(&z, 39, &LinearBaselineConfig::new(lookback).unwrap(), horizon).unwrap();
        for (t, v) in f.iter() {
            prop_assert_eq!(v, (slope * t + intercept) as f64);
        }
    }

    #[test]
    fn affine_inputs_reproduced(
        slope in -5.0f64..5.0,
        intercept in -100.0f64..100.0,
        lookback in 1usize..30,
    ) {
        let z = Series::new(0, (0..40).map(|t| slope * t as f64 + intercept).collect()).unwrap();
        let f = linear_forecast(&z, 39, &LinearBaselineConfig::new(lookback).unwrap(), 7).unwrap();
        for (t, v) in f.iter() {
            let want = slope * t as f64 + intercept;
            prop_assert!((v - want).abs() <= 1e-9 * (1.0 + want.abs()));
        }
    }
}
