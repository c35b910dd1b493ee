use parisian_ruin::model::{DriftSpec, ModelParams};
use parisian_ruin::paths::{sample_replicate, GridSpec};
use parisian_ruin::pickands::{estimate_p_curve, replicate_values, PickandsQuery};
use parisian_ruin::ruin::detect_parisian;
use proptest::prelude::*;

fn ruined(seed: u64, u: f64, t_window: f64) -> bool {
    let p = ModelParams::new(u, 0.6, 1.0, 0.5, t_window).unwrap();
    let grid = GridSpec::new(3.0, 300).unwrap();
    let path = sample_replicate(&grid, &p, seed, 0, None).unwrap();
    detect_parisian(&path, &p).unwrap()
}

fn query(a: f64, lambda: f64, n_t: usize, n_s: usize, bm: usize, seed: u64) -> PickandsQuery<f64> {
    PickandsQuery {
        bm_steps: Some(bm),
        ..PickandsQuery::new(DriftSpec::new(1.0, a).unwrap(), lambda, n_t, n_s, 24, seed)
    }
}

fn values(q: &PickandsQuery<f64>) -> Vec<f64> {
    replicate_values(q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ruin_is_monotone_in_reserve(seed in 0u64..10_000, u1 in 0.0..1.5, du in 0.0..1.0, w in 0usize..4) {
        let t = 0.05 * w as f64;
        prop_assert!(!ruined(seed, u1 + du, t) || ruined(seed, u1, t));
    }

    #[test]
    fn ruin_is_monotone_in_window(seed in 0u64..10_000, u in 0.0..1.0, w1 in 0usize..8, dw in 0usize..8) {
        let (t1, t2) = (0.03 * w1 as f64, 0.03 * (w1 + dw) as f64);
        prop_assert!(!ruined(seed, u, t2) || ruined(seed, u, t1));
    }

    #[test]
    fn constant_grows_with_horizon(seed in 0u64..1_000, a in 0.2..1.0) {
        let q = query(a, 1.0, 16, 4, 64, seed);
        let longer = q.doubled(1);
        for (x, y) in values(&q).iter().zip(values(&longer).iter()) {
            prop_assert!(y >= x);
        }
        let curve = estimate_p_curve(&longer, &[0.25, 0.5, 1.0, 1.5, 2.0]).unwrap();
        for pair in curve.points.windows(2) {
            prop_assert!(pair[1].estimate.value >= pair[0].estimate.value);
        }
    }

    #[test]
    fn constant_shrinks_as_window_widens(seed in 0u64..1_000, k in 1usize..4) {
        // inner grids of step 1/16 on [a, 1]: the narrower one is a subset
        let wide = 0.25 * k as f64;
        let narrow = wide + 0.25;
        let n_wide = ((1.0 - wide) * 16.0).round() as usize;
        let n_narrow = ((1.0 - narrow) * 16.0).round() as usize;
        let qw = query(wide, 2.0, 8, n_wide, 8 * 64, seed);
        let qn = query(narrow, 2.0, 8, n_narrow.max(1), 8 * 64, seed);
        for (w, n) in values(&qw).iter().zip(values(&qn).iter()) {
            prop_assert!(w <= n);
        }
    }

    #[test]
    fn nested_grids_order_sup_and_inf(seed in 0u64..1_000, a in 0.1..0.9) {
        let base = query(a, 2.0, 8, 4, 8 * 16, seed);
        let finer_t = PickandsQuery { n_grid_t: 16, ..base };
        let finer_s = PickandsQuery { n_grid_s: 8, ..base };
        let v = values(&base);
        for (x, y) in v.iter().zip(values(&finer_t).iter()) {
            prop_assert!(y >= x);
        }
        for (x, y) in v.iter().zip(values(&finer_s).iter()) {
            prop_assert!(y <= x);
        }
    }
}
