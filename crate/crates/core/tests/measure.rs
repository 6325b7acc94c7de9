use monofock::measure::*;
use monofock::precision;
use num_complex::Complex64;
use proptest::prelude::*;

const BITS: usize = 128;

/// A symmetric measure with `k` positive atoms.
fn symmetric_measure() -> impl Strategy<Value = AtomicMeasure> {
    proptest::collection::btree_set(1u32..=40, 1..=3).prop_flat_map(|xs| {
        let k = xs.len();
        (Just(xs), proptest::collection::vec(1u32..=9, k))
    })
    .prop_map(|(xs, ws)| {
        let total: u32 = ws.iter().sum::<u32>() * 2;
        let pos: Vec<f64> = xs.iter().map(|&x| f64::from(x) / 8.0).collect();
        let mut atoms: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
        atoms.extend(&pos);
        let mut weights: Vec<f64> = ws.iter().rev().map(|&w| f64::from(w) / f64::from(total)).collect();
        weights.extend(ws.iter().map(|&w| f64::from(w) / f64::from(total)));
        AtomicMeasure::from_f64(&atoms, &weights, BITS, "sym").unwrap()
    })
}

fn mass(mu: &AtomicMeasure) -> f64 {
    mu.weights().iter().map(precision::to_f64).sum()
}

#[test]
fn bernoulli_squared_is_golden() {
    let b = AtomicMeasure::bernoulli(BITS).unwrap();
    let mu2 = monotone_convolve(&b, &b).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let want = [-phi, 1.0 - phi, phi - 1.0, phi];
    for (a, w) in mu2.atoms_f64().iter().zip(want) {
        assert!((a - w).abs() < 1e-15);
    }
    assert!((mu2.weights_f64()[3] - (5.0 + 5f64.sqrt()) / 20.0).abs() < 1e-15);
}

#[test]
fn general_path_agrees_with_fast_path() {
    let b = AtomicMeasure::bernoulli(BITS).unwrap();
    let mu2 = monotone_convolve(&b, &b).unwrap();
    let fast = monotone_convolve(&mu2, &b).unwrap();
    let slow = monotone_convolve_by_roots(&mu2, &b).unwrap();
    assert!(fast.max_deviation(&slow).unwrap() < 1e-30);
}

#[test]
fn convolution_is_associative() {
    let b = AtomicMeasure::bernoulli(BITS).unwrap();
    let bb = monotone_convolve(&b, &b).unwrap();
    let left = monotone_convolve_by_roots(&bb, &b).unwrap();
    let right = monotone_convolve_by_roots(&b, &bb).unwrap();
    assert!(left.max_deviation(&right).unwrap() < 2f64.powi(-(BITS as i32) / 2));
}

#[test]
fn arcsine_law() {
    let law = ArcsineLaw;
    assert!((law.quadrature_mass(64) - 1.0).abs() < 1e-14);
    assert_eq!(law.cdf(0.0), 0.5);
    assert!((law.quantile(law.cdf(0.7)) - 0.7).abs() < 1e-12);
    let mu = law.discretize(200).unwrap();
    assert!(kolmogorov_distance(&mu, &law, 1.0).unwrap() < 0.01);
}

#[test]
fn json_round_trip() {
    let b = AtomicMeasure::bernoulli(BITS).unwrap();
    let text = serde_json::to_string(&b.to_json()).unwrap();
    let back = AtomicMeasure::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.atoms_f64(), b.atoms_f64());
    assert_eq!(back.weights_f64(), b.weights_f64());
}

#[test]
fn invalid_measures_are_rejected() {
    assert!(AtomicMeasure::from_f64(&[0.0, 1.0], &[0.5, 0.4], BITS, "x").is_err());
    assert!(AtomicMeasure::from_f64(&[1.0, 0.0], &[0.5, 0.5], BITS, "x").is_err());
    assert!(AtomicMeasure::from_f64(&[0.0, 1.0], &[1.5, -0.5], BITS, "x").is_err());
    let b = AtomicMeasure::bernoulli(BITS).unwrap();
    assert!(cauchy_transform(&b, Complex64::new(1.0, 0.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bernoulli_driver_keeps_mass_and_symmetry(nu in symmetric_measure()) {
        let b = AtomicMeasure::bernoulli(BITS).unwrap();
        let out = monotone_convolve(&b, &nu).unwrap();
        prop_assert_eq!(out.len(), 2 * nu.len());
        prop_assert!((mass(&out) - 1.0).abs() < 1e-12);
        prop_assert!(out.is_symmetric(1e-12));
    }

    #[test]
    fn cauchy_transform_is_conjugate_symmetric(nu in symmetric_measure(), re in -5.0f64..5.0, im in 0.1f64..5.0) {
        let z = Complex64::new(re, im);
        let g = cauchy_transform(&nu, z).unwrap();
        let gc = cauchy_transform(&nu, z.conj()).unwrap();
        prop_assert!((g.conj() - gc).norm() < 1e-12);
        prop_assert!(g.im < 0.0);
    }

    #[test]
    fn moments_of_symmetric_measures(nu in symmetric_measure()) {
        let ms = moment_sequence(&nu, 7);
        prop_assert_eq!(precision::to_f64(&ms[0]), 1.0);
        for k in [1, 3, 5, 7] {
            prop_assert!(precision::to_f64(&ms[k]).abs() < 1e-25);
        }
        prop_assert!(precision::to_f64(&ms[2]) > 0.0);
    }
}
