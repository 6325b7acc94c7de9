use monofock::binomial::*;
use monofock::precision::{self, from_f64, to_f64};
use proptest::prelude::*;

#[test]
fn mu_1_and_mu_2() {
    let mu1 = binomial_measure(1).unwrap();
    assert_eq!(mu1.measure.atoms_f64(), &[-1.0, 1.0]);
    assert_eq!(mu1.measure.weights_f64(), &[0.5, 0.5]);
    let mu2 = binomial_measure(2).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((to_f64(&mu2.max_atom) - phi).abs() < 1e-15);
    assert!(mu2.sandwich_holds());
}

#[test]
fn streaming_matches_stored() {
    for n in [1, 3, 7, 10] {
        let law = binomial_measure_with(n, 128, MAX_BINOMIAL_N).unwrap();
        let streamed: Vec<(f64, f64)> = StreamingBinomial::new(n).unwrap().collect();
        assert_eq!(streamed.len(), law.measure.len());
        for ((a, w), (b, v)) in streamed.iter().zip(law.measure.atoms_f64().iter().zip(law.measure.weights_f64())) {
            assert!((a - b).abs() < 1e-13 && (w - v).abs() < 1e-13, "n = {n}");
        }
    }
}

#[test]
fn clt_table_columns() {
    let rows = clt_table(12).unwrap();
    assert_eq!(rows.len(), 12);
    assert_eq!((rows[0].max_atom, rows[0].ratio), (1.0, 1.0));
    assert!(rows.windows(2).all(|w| w[1].ratio > w[0].ratio && w[1].ks_distance < w[0].ks_distance));
    assert!(rows.iter().all(|r| r.ratio < std::f64::consts::SQRT_2));
}

#[test]
fn caps_are_enforced() {
    assert!(binomial_measure(0).is_err());
    assert!(binomial_measure(MAX_BINOMIAL_N + 1).is_err());
    assert!(binomial_measure_with(6, 128, 5).is_err());
}

#[test]
fn printed_weight_formula_is_not_a_distribution() {
    let mu1 = binomial_measure(1).unwrap();
    let mu2 = binomial_measure(2).unwrap();
    let vals: Vec<f64> = (0..4)
        .map(|k| to_f64(&printed_weight_formula(k, mu2.measure.atoms(), mu1.measure.atoms()).unwrap()))
        .collect();
    let q = 1.0 / (4.0 * 5f64.sqrt());
    for v in &vals {
        assert!((v.abs() - q).abs() < 1e-15);
    }
    let total: f64 = vals.iter().map(|v| v.abs()).sum();
    assert!((total - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    assert!(printed_weight_formula(0, mu1.measure.atoms(), mu1.measure.atoms()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn children_multiply_to_minus_one_and_conserve_mass(a in -50.0f64..50.0, w in 0.001f64..1.0) {
        let a = from_f64(a, 128);
        let (lo, hi) = children_atoms(&a);
        prop_assert!(lo < hi);
        prop_assert!((to_f64(&(&lo * &hi)) + 1.0).abs() < 1e-30);
        prop_assert!((to_f64(&(&lo + &hi)) - to_f64(&a)).abs() < 1e-25);
        let w = from_f64(w, 128);
        let sum = child_weight(&w, &lo).unwrap() + child_weight(&w, &hi).unwrap();
        prop_assert!(to_f64(&(sum - &w)).abs() < 1e-30);
    }

    #[test]
    fn measures_are_symmetric_with_inverse_pairs(n in 1usize..=9) {
        let law = binomial_measure_with(n, 128, MAX_BINOMIAL_N).unwrap();
        prop_assert_eq!(law.measure.len(), 1 << n);
        prop_assert!(law.measure.is_symmetric(1e-30));
        prop_assert!(law.inverse_pairs_hold(1e-30));
        prop_assert!(law.sandwich_holds());
        let mass: f64 = law.measure.weights().iter().map(precision::to_f64).sum();
        prop_assert!((mass - 1.0).abs() < 1e-14);
        prop_assert!(monotonicity_inequality(n, to_f64(&law.max_atom)));
    }

    #[test]
    fn top_chain_is_the_largest_atom(n in 1usize..=10) {
        let law = binomial_measure_with(n, 128, MAX_BINOMIAL_N).unwrap();
        prop_assert!(to_f64(&(&max_atom(n, 128) - &law.max_atom)).abs() < 1e-30);
    }
}
