use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn parisian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parisian"))
        .args(args)
        .env_remove("RUIN_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn out_arg(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn zero_reserve_is_ruined_at_once() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "r");
    let o = parisian(&[
        "ruin-prob",
        "--u",
        "0",
        "--c",
        "1",
        "--sigma",
        "1",
        "--delta",
        "1",
        "--T",
        "0",
        "--n-paths",
        "1000",
        "--seed",
        "7",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&dir.path().join("r.json"));
    assert_eq!(v["estimate"]["value"], 1.0);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["config"]["params"]["u"], 0.0);
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.starts_with("u,estimate,std_err,ci_low,ci_high,n_paths,hits,exact,flags\n"));
}

const SIGMA: &str = "1.4142136";

#[test]
fn zero_interest_matches_exponential_law() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "z");
    let o = parisian(&[
        "ruin-prob",
        "--delta",
        "0",
        "--T",
        "0",
        "--u",
        "1",
        "--c",
        "1",
        "--sigma",
        SIGMA,
        "--n-paths",
        "20000",
        "--seed",
        "3",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&dir.path().join("z.json"));
    let (est, se) = (
        v["estimate"]["value"].as_f64().unwrap(),
        v["estimate"]["std_err"].as_f64().unwrap(),
    );
    let sigma: f64 = SIGMA.parse().unwrap();
    let exact = (-2.0 / (sigma * sigma)).exp();
    assert!((est - exact).abs() <= 3.0 * se, "{est} +/- {se} vs {exact}");
}

#[test]
fn repeated_runs_give_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = out_arg(dir.path(), name);
        let o = parisian(&[
            "ruin-prob",
            "--u",
            "1",
            "--n-paths",
            "3000",
            "--seed",
            "11",
            "--out",
            &out,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(dir.path().join(format!("{name}.json"))).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "e");
    let o = Command::new(env!("CARGO_BIN_EXE_parisian"))
        .args(["ruin-prob", "--u", "1", "--n-paths", "100", "--out", &out])
        .env("RUIN_SEED", "4242")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&dir.path().join("e.json"))["seed"], 4242);
}

#[test]
fn rare_events_are_flagged_not_failed() {
    let o = parisian(&["ruin-prob", "--u", "3", "--n-paths", "200", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("flag=insufficient"), "{}", stdout(&o));
}

#[test]
fn degenerate_constant_is_exact() {
    let o = parisian(&["constant", "--a", "0", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains(&format!("{:.8e}", (-1f64).exp())), "{s}");
    assert!(s.contains("converged"), "{s}");
}

#[test]
fn tiny_ladder_is_exhausted() {
    let o = parisian(&[
        "constant",
        "--a",
        "1",
        "--b",
        "1",
        "--lambda",
        "0.5",
        "--lambda-max",
        "0.1",
        "--n-reps",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("ladder-exhausted"), "{}", stdout(&o));
}

#[test]
fn constant_is_stable_across_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let out = out_arg(dir.path(), seed);
        let o = parisian(&[
            "constant", "--a", "1", "--b", "1", "--n-reps", "4000", "--seed", seed, "--out", &out,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v = json(&dir.path().join(format!("{seed}.json")));
        (
            v["estimate"]["value"].as_f64().unwrap(),
            v["estimate"]["std_err"].as_f64().unwrap(),
        )
    };
    let ((x, sx), (y, sy)) = (run("1"), run("2"));
    assert!(
        (x - y).abs() <= 2.0 * (sx * sx + sy * sy).sqrt(),
        "{x} +/- {sx} vs {y} +/- {sy}"
    );
}

#[test]
fn compare_has_exact_column_for_classical_ruin() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "c");
    let o = parisian(&[
        "compare",
        "--u-values",
        "0,1",
        "--n-paths",
        "2000",
        "--n-reps",
        "1000",
        "--h",
        "0.02",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("u,mc,stderr,asymptotic,exact,ratio"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[4], "1.00000000e0");
    let v = json(&dir.path().join("c.json"));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(v["config"].is_object() && v["seed"].is_u64());
}

#[test]
fn ruin_time_rejects_abscissae_outside_the_domain() {
    let o = parisian(&["ruin-time", "--u", "6", "--x-values", "-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("domain"), "{}", stderr(&o));
}

#[test]
fn ruin_time_curve_is_a_distribution_function() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "t");
    let o = parisian(&[
        "ruin-time",
        "--u",
        "4",
        "--x-values",
        "-0.5,0.5,2,20",
        "--n-paths",
        "5000",
        "--n-reps",
        "1000",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for w in rows.windows(2) {
        assert!(w[0][1] <= w[1][1] && w[0][2] <= w[1][2], "{rows:?}");
    }
    assert!(rows
        .iter()
        .all(|r| (0.0..=1.0).contains(&r[1]) && (0.0..=1.0 + 1e-9).contains(&r[2])));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["ruin-prob", "--u", "-1"][..],
        &["ruin-prob"],
        &["ruin-prob", "--u", "1", "--bogus", "3"],
        &["ruin-prob", "--u", "1", "--sigma", "abc"],
        &["ruin-prob", "--u", "1", "--workers", "0"],
        &["ruin-prob", "--u", "1", "--T", "0.5", "--monitoring", "bridge"],
        &["ruin-time", "--u", "1", "--delta", "0"],
        &["constant", "--a", "2", "--b", "1"],
        &["ruin-prob", "--u", "1", "--config", "/nonexistent/run.cfg"],
    ] {
        let o = parisian(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# classical run\nu = 0.5\nn-paths = 500\nseed = 9\n").unwrap();
    let out = out_arg(dir.path(), "f");
    let cfg_arg = cfg.display().to_string();
    let o = parisian(&["ruin-prob", "--config", &cfg_arg, "--n-paths", "700", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&dir.path().join("f.json"));
    assert_eq!(v["config"]["params"]["u"], 0.5);
    assert_eq!(v["config"]["n_paths"], 700);
    assert_eq!(v["seed"], 9);

    std::fs::write(&cfg, "u = 0.5\ncolour = red\n").unwrap();
    let o = parisian(&["ruin-prob", "--config", &cfg_arg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn selftest_lists_every_suite() {
    let o = parisian(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    for (name, _) in parisian_cli::selftest::SUITES {
        assert!(s.contains(&format!("PASS {name}")), "{s}");
    }
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(parisian(&["--help"]).status.code(), Some(0));
    assert_eq!(parisian(&["--version"]).status.code(), Some(0));
    assert_eq!(parisian(&[]).status.code(), Some(2));
}
