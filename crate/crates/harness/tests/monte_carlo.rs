use std::f64::consts::FRAC_PI_4;

use bandlimit_core::{BandParams64, MovingAverageConfig, Window};
use bandlimit_harness::{run_trials, SimConfig, TrialAggregate, TrialRunner};

fn band() -> BandParams64 {
    BandParams64::new(FRAC_PI_4, 45, 0.05).unwrap()
}

fn window() -> Window {
    Window::new(-90, 0).unwrap()
}

#[test]
fn noiseless_rest_state_has_zero_residuals() {
    let sim = SimConfig { sigma: 0.0, z0: 0.0, ..Default::default() };
    let agg = run_trials(1, sim, band(), window(), 20, MovingAverageConfig::default()).unwrap();
    assert_eq!(agg.n_trials, 1);
    assert!(agg.per_point_residuals.iter().all(|&r| r == 0.0));
    assert_eq!(agg.smoothing_total, 0.0);
    assert_eq!(agg.extrap_total, 0.0);
}

#[test]
fn window_must_be_two_n_plus_one() {
    let err = run_trials(1, SimConfig::default(), band(), Window::new(-80, 0).unwrap(), 20, MovingAverageConfig::default());
    assert!(err.is_err());
    assert!(run_trials(0, SimConfig::default(), band(), window(), 20, MovingAverageConfig::default()).is_err());
}

#[test]
fn residuals_are_finite_and_non_negative() {
    let runner = TrialRunner::new(SimConfig::default(), band(), window(), 20, MovingAverageConfig::default()).unwrap();
    for i in 0..200 {
        let o = runner.run(i).unwrap();
        assert_eq!(o.extrap_abs.len(), 20);
        assert!(o.extrap_abs.iter().chain(&o.extrap_squared).all(|v| v.is_finite() && *v >= 0.0));
        assert!(o.smoothing_abs.is_finite() && o.smoothing_abs >= 0.0);
    }
}

#[test]
fn aggregate_ignores_execution_order() {
    let runner = TrialRunner::new(SimConfig { seed: 99, ..Default::default() }, band(), window(), 20, MovingAverageConfig::default()).unwrap();
    let forward: Vec<_> = (0..300).map(|i| runner.run(i).unwrap()).collect();
    let mut backward: Vec<_> = (0..300).rev().map(|i| runner.run(i).unwrap()).collect();
    let a = TrialAggregate::from_outcomes(&forward, 91).unwrap();
    let b = TrialAggregate::from_outcomes(&backward, 91).unwrap();
    for (x, y) in a.per_point_residuals.iter().zip(&b.per_point_residuals) {
        assert!((x - y).abs() <= 1e-12);
    }
    assert!((a.smoothing_total - b.smoothing_total).abs() <= 1e-12);
    backward.reverse();
    assert_eq!(forward, backward);
}

#[test]
fn aggregate_independent_of_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_trials(400, SimConfig::default(), band(), window(), 20, MovingAverageConfig::default()).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn early_profile_rises() {
    let agg = run_trials(2000, SimConfig { seed: 2024, ..Default::default() }, band(), window(), 20, MovingAverageConfig::default()).unwrap();
    let r = &agg.per_point_residuals;
    eprintln!("profile {r:?}");
    eprintln!("smoothing {} extrap {}", agg.smoothing_per_point, agg.extrap_per_point);
    assert!(r[0] < r[1] && r[1] < r[2]);
    assert!((agg.extrap_total - r.iter().sum::<f64>()).abs() < 1e-12);
    assert!((agg.smoothing_total / 91.0 - agg.smoothing_per_point).abs() < 1e-15);
}
