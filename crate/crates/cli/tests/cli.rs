use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bandlimit_cli::{parse_plot_csv, parse_report_json, RunConfig, RunReport};
use tempfile::TempDir;

fn blx(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blx"))
        .args(args)
        .current_dir(dir)
        .env_remove("BLX_THREADS")
        .output()
        .expect("spawn blx")
}

/// Random-walk prices with a date and a "high" column.
fn write_prices(dir: &Path, n: usize) -> PathBuf {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut price = 40.0f64;
    let mut text = String::from("date,open,high\n");
    for i in 0..n {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        price += (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        text.push_str(&format!("d{i:04},{:.3},{:.3}\n", price - 0.2, price));
    }
    let path = dir.join("prices.csv");
    fs::write(&path, text).unwrap();
    path
}

fn read_report(path: &Path) -> RunReport {
    parse_report_json(&fs::read(path).unwrap()).unwrap()
}

fn ok(out: &Output) {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_writes_profile() {
    let dir = TempDir::new().unwrap();
    let out = blx(
        &["simulate", "--trials", "40", "--n-modes", "45", "--omega", "pi/4", "--ridge", "0.05", "--horizon", "20", "--seed", "42", "--out", "r.json"],
        dir.path(),
    );
    ok(&out);
    let report = read_report(&dir.path().join("r.json"));
    let agg = report.aggregate.as_ref().unwrap();
    assert_eq!(agg.per_point_residuals.len(), 20);
    assert_eq!(agg.n_trials, 40);
    assert_eq!(report.reports[0].per_point.len(), 20);
    assert_eq!(report.reports[0].start_t, 1);
    let RunConfig::Simulate(c) = &report.config else { panic!() };
    assert_eq!(c.band.omega, std::f64::consts::FRAC_PI_4);
}

#[test]
fn unknown_flag_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = blx(&["simulate", "--trials", "5", "--bogus", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("r.json").exists());
    assert!(!out.stderr.is_empty());
}

#[test]
fn backtest_emits_160_days() {
    let dir = TempDir::new().unwrap();
    let input = write_prices(dir.path(), 300);
    let before = fs::read(&input).unwrap();
    let out = blx(
        &["backtest", "--input", "prices.csv", "--column", "high", "--window", "91", "--horizon", "5", "--repetitions", "32", "--baseline", "90", "--out", "b.json", "--plot", "b.csv"],
        dir.path(),
    );
    ok(&out);
    assert_eq!(fs::read(&input).unwrap(), before, "input must not change");

    let report = read_report(&dir.path().join("b.json"));
    assert_eq!(report.report("causal").unwrap().n_points, 160);
    assert_eq!(report.report("linear").unwrap().n_points, 160);
    assert_eq!(report.named_series("forecast").unwrap().values.len(), 160);
    let cmp = report.comparison.as_ref().unwrap();
    assert_eq!(cmp.causal.n_points, 160);

    let plot = parse_plot_csv(&fs::read(dir.path().join("b.csv")).unwrap()).unwrap();
    let forecast = plot.iter().find(|s| s.name == "forecast").unwrap();
    assert_eq!(forecast.values, report.named_series("forecast").unwrap().values);
}

#[test]
fn forecast_plot_and_labels() {
    let dir = TempDir::new().unwrap();
    write_prices(dir.path(), 120);
    let out = blx(
        &["forecast", "--input", "prices.csv", "--column", "2", "--date-column", "date", "--horizon", "3", "--format", "csv"],
        dir.path(),
    );
    ok(&out);
    let plot = parse_plot_csv(&out.stdout).unwrap();
    let forecast = plot.iter().find(|s| s.name == "forecast").unwrap();
    assert_eq!(forecast.values.len(), 3);
    assert_eq!(forecast.start_t, 92);
    let rows = String::from_utf8(out.stdout).unwrap().lines().filter(|l| l.starts_with("forecast,")).count();
    assert_eq!(rows, 3);

    let out = blx(&["forecast", "--input", "prices.csv", "--column", "high", "--date-column", "date", "--horizon", "3"], dir.path());
    ok(&out);
    let report = parse_report_json(&out.stdout).unwrap();
    let raw = report.named_series("raw").unwrap();
    assert_eq!(raw.labels.as_ref().unwrap()[0], "d0000");
    assert_eq!(report.reports.iter().map(|r| r.method.as_str()).collect::<Vec<_>>(), ["causal", "linear", "causal-historical"]);
}

#[test]
fn data_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    write_prices(dir.path(), 120);
    fs::write(dir.path().join("bad.csv"), "t,value\n1,10.0\n2,abc\n").unwrap();
    let cases: [&[&str]; 4] = [
        &["forecast", "--input", "prices.csv", "--column", "low"],
        &["forecast", "--input", "missing.csv", "--column", "high"],
        &["forecast", "--input", "bad.csv", "--column", "value"],
        &["backtest", "--input", "prices.csv", "--column", "high"],
    ];
    for args in cases {
        let out = blx(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    let out = blx(&["forecast", "--input", "bad.csv", "--column", "value"], dir.path());
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("row 2") && msg.contains("value"), "{msg}");
}

#[test]
fn usage_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    write_prices(dir.path(), 120);
    let cases: [&[&str]; 5] = [
        &["forecast", "--input", "prices.csv", "--column", "high", "--horizon", "0"],
        &["forecast", "--input", "prices.csv", "--column", "high", "--ridge", "-1"],
        &["forecast", "--input", "prices.csv", "--column", "high", "--omega", "pi/x"],
        &["backtest", "--input", "prices.csv", "--column", "high", "--overlap", "sideways"],
        &["forecast", "--column", "high"],
    ];
    for args in cases {
        assert_eq!(blx(args, dir.path()).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn rerun_regenerates_report() {
    let dir = TempDir::new().unwrap();
    write_prices(dir.path(), 300);
    ok(&blx(&["backtest", "--input", "prices.csv", "--column", "high", "--horizon", "2", "--repetitions", "40", "--baseline", "5", "--out", "a.json"], dir.path()));
    ok(&blx(&["rerun", "a.json", "--out", "b.json"], dir.path()));
    let a = read_report(&dir.path().join("a.json"));
    let b = read_report(&dir.path().join("b.json"));
    assert_eq!(a.without_timing(), b.without_timing());
    let RunConfig::Backtest(c) = &a.config else { panic!() };
    assert_eq!(c.input.sha256.as_ref().unwrap().len(), 64);

    // Editing the input invalidates the echo.
    let path = dir.path().join("prices.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("d9999,1.0,1.0\n");
    fs::write(&path, text).unwrap();
    let out = blx(&["rerun", "a.json", "--out", "c.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("c.json").exists());
}

#[test]
fn compare_two_reports() {
    let dir = TempDir::new().unwrap();
    write_prices(dir.path(), 300);
    let base = ["backtest", "--input", "prices.csv", "--column", "high", "--horizon", "5", "--repetitions", "32"];
    ok(&blx(&[&base[..], &["--baseline", "90", "--out", "a90.json"]].concat(), dir.path()));
    ok(&blx(&[&base[..], &["--baseline", "5", "--out", "a5.json"]].concat(), dir.path()));
    ok(&blx(&["compare", "a90.json", "a5.json", "--first-method", "linear", "--out", "c.json"], dir.path()));

    let a90 = read_report(&dir.path().join("a90.json"));
    let a5 = read_report(&dir.path().join("a5.json"));
    let c = read_report(&dir.path().join("c.json"));
    let cmp = c.comparison.unwrap();
    assert_eq!(cmp.causal.mean, a90.report("linear").unwrap().mean);
    assert_eq!(cmp.linear.mean, a5.report("linear").unwrap().mean);

    let out = blx(&["compare", "a90.json", "a5.json", "--first-method", "nope"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let sim = ["simulate", "--trials", "3", "--out", "s.json"];
    ok(&blx(&sim, dir.path()));
    // 20 simulated points against 160 backtest days.
    assert_eq!(blx(&["compare", "s.json", "a5.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_results() {
    let dir = TempDir::new().unwrap();
    let run = |threads: Option<&str>, out: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_blx"));
        cmd.args(["simulate", "--trials", "64", "--seed", "5", "--out", out]).current_dir(dir.path());
        match threads {
            Some(t) => cmd.env("BLX_THREADS", t),
            None => cmd.env_remove("BLX_THREADS"),
        };
        cmd.output().unwrap()
    };
    ok(&run(Some("1"), "one.json"));
    ok(&run(None, "many.json"));
    let one = read_report(&dir.path().join("one.json"));
    let many = read_report(&dir.path().join("many.json"));
    assert_eq!(one.timing.as_ref().unwrap().threads, 1);
    assert_eq!(one.without_timing(), many.without_timing());
    assert_eq!(run(Some("zero"), "bad.json").status.code(), Some(1));
}
