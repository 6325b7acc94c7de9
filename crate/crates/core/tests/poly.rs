use monofock::poly::*;
use monofock::precision::to_f64;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn product_of_roots(roots: &[i64]) -> IntPoly {
    roots.iter().fold(IntPoly::one(), |p, &r| &p * &IntPoly::from_i64(&[-r, 1]))
}

#[test]
fn first_levels() {
    assert_eq!(mgf_pair(1).unwrap().denominator, IntPoly::from_i64(&[1, 0, -1]));
    assert_eq!(mgf_pair(2).unwrap().denominator, IntPoly::from_i64(&[1, 0, -3, 0, 1]));
    assert_eq!(mgf_pair(2).unwrap().numerator, IntPoly::from_i64(&[1, 0, -1]));
    let p3 = mgf_pair(3).unwrap().denominator;
    assert_eq!(p3.degree(), Some(8));
    assert!(p3.is_even());
    assert_eq!(p3.reversed(), p3);
}

#[test]
fn series_gives_catalan_like_moments() {
    let s = series_of(&mgf_pair(2).unwrap(), 8).unwrap();
    let c: Vec<BigInt> = s.integer_coefficients().unwrap();
    assert_eq!(c, [1, 0, 2, 0, 5, 0, 13, 0, 34].map(BigInt::from));
}

#[test]
fn structure_and_interlacing() {
    for n in 1..=5 {
        assert!(structure_check(n).unwrap());
        assert!(interlacing_check(n).unwrap());
    }
    assert!(structure_check(6).unwrap());
}

#[test]
fn residue_measure_matches_recursion() {
    let mu = measure_from_polys(3, 128).unwrap();
    let law = monofock::binomial::binomial_measure_with(3, 128, 24).unwrap();
    assert!(mu.max_deviation(&law.measure).unwrap() < 2f64.powi(-64));
}

#[test]
fn golden_roots() {
    let roots = sturm_isolate(&IntPoly::from_i64(&[-1, -1, 1])).unwrap();
    assert_eq!(roots.len(), 2);
    let phi = to_f64(&refine_root(&roots[1], 80));
    assert!((phi - 1.618_033_988_749_895).abs() < 1e-15);
}

#[test]
fn caps() {
    assert!(mgf_pair(MAX_MGF_LEVEL + 1).is_err());
    assert!(series_of(&mgf_pair(1).unwrap(), MAX_SERIES_ORDER + 1).is_err());
    assert!(sturm_isolate(&product_of_roots(&[1, 1])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sturm_finds_every_distinct_root(roots in proptest::collection::btree_set(-30i64..30, 1..7)) {
        let roots: Vec<i64> = roots.into_iter().collect();
        let p = product_of_roots(&roots);
        let found = sturm_isolate(&p).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for (ri, &r) in found.iter().zip(&roots) {
            prop_assert!((to_f64(&refine_root(ri, 64)) - r as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn gcd_divides_both(a in proptest::collection::vec(-5i64..5, 1..4), b in proptest::collection::vec(-5i64..5, 1..4), c in proptest::collection::vec(-5i64..5, 1..3)) {
        let (a, b, c) = (product_of_roots(&a), product_of_roots(&b), product_of_roots(&c));
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y);
        prop_assert!(x.pseudo_rem(&g).is_zero());
        prop_assert!(y.pseudo_rem(&g).is_zero());
        prop_assert!(g.degree() >= c.degree());
    }

    #[test]
    fn series_inverse_round_trips(c in proptest::collection::vec(-4i64..5, 1..6)) {
        let mut c = c;
        c[0] = 1 + c[0].abs();
        let s = PowerSeries::from_poly(&IntPoly::from_i64(&c), 10);
        let one = s.mul(&s.inverse().unwrap());
        prop_assert_eq!(one, PowerSeries::one(10));
    }

    #[test]
    fn exact_evaluation_matches_sign(roots in proptest::collection::btree_set(-9i64..9, 1..5), x in -20i64..20) {
        let roots: Vec<i64> = roots.into_iter().collect();
        let p = product_of_roots(&roots);
        let v: i64 = roots.iter().map(|r| x - r).product();
        let q = BigRational::from_integer(BigInt::from(x));
        prop_assert_eq!(p.eval_rational(&q), BigRational::from_integer(BigInt::from(v)));
        prop_assert_eq!(p.sign_at(&q), v.signum() as i32);
    }
}
