use parisian_ruin::model::{asymptotic_parisian_ruin, exact_classical_ruin, DriftSpec, ModelParams};
use parisian_ruin::normal::std_normal_sf;
use parisian_ruin::pickands::{estimate_f, estimate_p, f_replicate_values, Estimator, FQuery, PickandsQuery};

// P^f_1[0, inf) for f(t) = (sqrt(t) - 1)^2: e^{-1} / Psi(sqrt 2)
fn unit_window_constant() -> f64 {
    (-1.0_f64).exp() / std_normal_sf(2.0_f64.sqrt()).unwrap()
}

#[test]
fn closed_form_reference() {
    assert!((unit_window_constant() - 4.677_448_133_020_013).abs() < 1e-12);
}

#[test]
fn tilted_extrapolated_constant_hits_closed_form() {
    let q = PickandsQuery::new(DriftSpec::new(1.0, 1.0).unwrap(), 16.0, 2048, 1, 10_000, 21)
        .with_estimator(Estimator::Tilted, true);
    let e = estimate_p(&q).unwrap();
    let exact = unit_window_constant();
    assert!(e.std_err < 0.005 * exact, "{e:?}");
    assert!((e.value - exact).abs() < 0.01 * exact + 3.0 * e.std_err, "{e:?}");
}

#[test]
fn asymptotic_with_closed_form_constant_is_close_at_moderate_reserve() {
    let p = ModelParams::classical(8.0, 1.0, 1.0, 1.0).unwrap();
    let k = parisian_ruin::Estimate::exact(unit_window_constant());
    let asym = asymptotic_parisian_ruin(&p, &k).unwrap().raw;
    let exact = exact_classical_ruin(&p).unwrap();
    assert!((exact / asym - 1.0).abs() < 0.2, "{exact} vs {asym}");
}

#[test]
fn zero_interest_constant_without_window_is_one() {
    let q = FQuery::new(0.0, 50.0, 5000, 10_000, 8).with_estimator(Estimator::Tilted);
    let e = estimate_f(&q).unwrap();
    assert!(e.value > 0.85 && e.value < 1.15, "{e:?}");
    assert!(e.std_err < 0.01);
}

#[test]
fn zero_interest_constant_decreases_with_window() {
    let base = FQuery::new(0.0, 20.0, 1000, 500, 4).with_estimator(Estimator::Tilted);
    let runs: Vec<Vec<f64>> = [0.0, 0.1, 0.5, 1.0, 2.0]
        .iter()
        .map(|&t| f_replicate_values(&FQuery { t_scaled: t, ..base }).unwrap())
        .collect();
    for pair in runs.windows(2) {
        for (a, b) in pair[0].iter().zip(&pair[1]) {
            assert!(b <= a && *b > 0.0);
        }
    }
}
