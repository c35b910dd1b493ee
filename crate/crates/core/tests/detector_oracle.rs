use parisian_ruin::model::ModelParams;
use parisian_ruin::paths::{sample_replicate, GridSpec, PathSample};
use parisian_ruin::ruin::{detect_parisian, parisian_ruin_time, window_points};

/// O(n w) scan: the first window of `w` points strictly above `u`, as
/// (right end, last index at or below `u` before it).
fn naive(values: &[f64], u: f64, w: usize) -> Option<(usize, usize)> {
    let n = values.len();
    for i in 0..n {
        if i + w > n {
            break;
        }
        if (i..i + w).all(|j| values[j] > u) {
            let eta = i + w - 1;
            let kappa = (0..eta).rev().find(|&j| values[j] <= u).unwrap_or(0);
            return Some((eta, kappa));
        }
    }
    None
}

fn check(path: &PathSample<f64>, p: &ModelParams<f64>) {
    let w = window_points(path.step(), p.t_window).unwrap();
    let expected = naive(&path.values, p.u, w);
    assert_eq!(detect_parisian(path, p).unwrap(), expected.is_some());
    let out = parisian_ruin_time(path, p).unwrap();
    match expected {
        None => assert!(!out.ruined && out.eta.is_none() && out.kappa.is_none()),
        Some((eta, kappa)) => {
            assert!(out.ruined);
            assert_eq!(out.eta, Some(path.times[eta]));
            assert_eq!(out.kappa, Some(path.times[kappa]));
            assert!(out.eta.unwrap() >= p.t_window);
        }
    }
}

#[test]
fn sliding_window_matches_naive_scan() {
    let combos = [
        (0.0, 0.05),
        (0.05, 0.05),
        (0.1, 0.02),
        (0.33, 0.05),
        (0.5, 0.1),
        (1.0, 0.01),
    ];
    let mut ruined = 0;
    for (k, &(t_window, h)) in combos.iter().enumerate() {
        for &u in &[0.0, 0.3, 0.8] {
            let p = ModelParams::new(u, 0.5, 1.0, 0.5, t_window).unwrap();
            let grid = GridSpec::with_step(4.0, h).unwrap();
            for i in 0..56 {
                let path = sample_replicate(&grid, &p, 900 + k as u64, i, None).unwrap();
                check(&path, &p);
                ruined += detect_parisian(&path, &p).unwrap() as usize;
            }
        }
    }
    // both outcomes must be exercised
    assert!(ruined > 100 && ruined < 900, "{ruined}");
}

#[test]
fn classical_ruin_is_first_exceedance() {
    let p = ModelParams::classical(0.4, 1.0, 1.0, 0.3).unwrap();
    let grid = GridSpec::new(5.0, 500).unwrap();
    for i in 0..200 {
        let path = sample_replicate(&grid, &p, 3, i, None).unwrap();
        let max = path.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(detect_parisian(&path, &p).unwrap(), max > p.u);
        let out = parisian_ruin_time(&path, &p).unwrap();
        let first = path.values.iter().position(|&v| v > p.u);
        assert_eq!(out.eta, first.map(|j| path.times[j]));
    }
}
