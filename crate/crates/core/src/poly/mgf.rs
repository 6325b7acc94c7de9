//! The MGF polynomial pairs `(P_m, Q_m)` with `M_m = Q_m / P_m`, their
//! structural properties, and the measure they encode.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::sturm::{separate, sign_at_root, sturm_isolate, RootInterval};
use super::IntPoly;
use crate::error::{check_cap, Error, Result};
use crate::measure::AtomicMeasure;
use crate::precision::{self, Real};

/// Largest level for the exact recurrence (degree `2^8`).
pub const MAX_MGF_LEVEL: usize = 8;
/// Largest `n` for [`structure_check`].
pub const MAX_STRUCTURE_LEVEL: usize = 7;
/// Largest `n` for [`interlacing_check`] (degree `2^7`).
pub const MAX_INTERLACING_LEVEL: usize = 6;
/// Largest `m` for [`measure_from_polys`].
pub const MAX_POLY_MEASURE_LEVEL: usize = 6;

/// Extra bits of root refinement beyond the requested precision.
const GUARD_BITS: usize = 32;

/// `Q / P` as a pair of integer polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
}

/// `(P_k, Q_k)` for `k = 1..=m`, from `P_1 = 1 − t²`, `Q_1 = 1`,
/// `Q_{k+1} = Q_k P_k`, `P_{k+1} = P_k² − t² Q_k²`.
pub fn mgf_sequence(m: usize) -> Result<Vec<RationalFn>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    check_cap("m", m, MAX_MGF_LEVEL)?;
    let t2 = IntPoly::monomial(BigInt::one(), 2);
    let mut out = Vec::with_capacity(m);
    let mut p = IntPoly::from_i64(&[1, 0, -1]);
    let mut q = IntPoly::one();
    for _ in 0..m {
        out.push(RationalFn { numerator: q.clone(), denominator: p.clone() });
        let next_p = &(&p * &p) - &(&t2 * &(&q * &q));
        q = &q * &p;
        p = next_p;
    }
    Ok(out)
}

/// `M_m = Q_m / P_m`.
pub fn mgf_pair(m: usize) -> Result<RationalFn> {
    Ok(mgf_sequence(m)?.pop().unwrap())
}

/// `P_{n+1}` is monic, has constant term 1 and only even powers, and
/// `Q_{n+1}(0) = 1`.
pub fn structure_check(n: usize) -> Result<bool> {
    check_cap("n", n, MAX_STRUCTURE_LEVEL)?;
    let rf = mgf_pair(n + 1)?;
    let p = &rf.denominator;
    let expected_degree = 1usize << (n + 1);
    Ok(p.is_monic()
        && p.degree() == Some(expected_degree)
        && p.constant_term().is_one()
        && p.is_even()
        && rf.numerator.constant_term().is_one()
        && rf.numerator.degree() == Some(expected_degree - 2))
}

fn positive_roots(p: &IntPoly) -> Result<Vec<RootInterval>> {
    let roots = sturm_isolate(p)?;
    let total = roots.len();
    let positive: Vec<_> = roots.into_iter().filter(|r| r.lo >= BigRational::zero()).collect();
    if p.degree() != Some(total) {
        return Err(Error::Structure(format!(
            "polynomial of degree {:?} has only {total} real roots",
            p.degree()
        )));
    }
    Ok(positive)
}

/// Evidence gathered by [`interlacing_report`].
#[derive(Clone, Debug, Serialize)]
pub struct InterlacingReport {
    pub n: usize,
    /// Positive roots of `P_{n+1}`, ascending.
    pub p_roots: Vec<f64>,
    /// Positive roots of `Q_{n+1}`, ascending.
    pub q_roots: Vec<f64>,
    /// Strict alternation `p < q < p < … < p`.
    pub alternates: bool,
    /// `gcd(P_k, Q_k)` is constant for every `k ≤ n + 1`.
    pub coprime: bool,
    /// `P_{n+1}` changes sign between consecutive roots of `P_n` and `Q_n`.
    pub sign_shadow: bool,
}

impl InterlacingReport {
    pub fn holds(&self) -> bool {
        self.p_roots.len() == 1 << self.n
            && self.q_roots.len() == (1 << self.n) - 1
            && self.alternates
            && self.coprime
            && self.sign_shadow
    }
}

fn to_f64(ri: &RootInterval) -> f64 {
    precision::to_f64(&super::refine_root(ri, 64))
}

pub fn interlacing_report(n: usize) -> Result<InterlacingReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_cap("n", n, MAX_INTERLACING_LEVEL)?;
    let seq = mgf_sequence(n + 1)?;
    let coprime = seq.iter().all(|rf| rf.denominator.gcd(&rf.numerator).degree() == Some(0));

    let (p, q) = (&seq[n].denominator, &seq[n].numerator);
    let p_pos = positive_roots(p)?;
    let q_pos = positive_roots(q)?;
    let p_roots = p_pos.iter().map(to_f64).collect();
    let q_roots = q_pos.iter().map(to_f64).collect();

    let alternates = coprime && {
        let mut merged: Vec<RootInterval> = p_pos.iter().chain(&q_pos).cloned().collect();
        separate(&mut merged);
        merged.len() % 2 == 1
            && merged
                .iter()
                .enumerate()
                .all(|(k, ri)| (*ri.poly == *p) == (k % 2 == 0))
    };

    // between a root of P_n and the next root of Q_n, P_{n+1} = P_n² − t²Q_n²
    // must change sign
    let sign_shadow = coprime && {
        let (pn, qn) = (&seq[n - 1].denominator, &seq[n - 1].numerator);
        let mut merged: Vec<RootInterval> = positive_roots(pn)?;
        if qn.degree() != Some(0) {
            merged.extend(positive_roots(qn)?);
        }
        separate(&mut merged);
        let mut signs = Vec::with_capacity(merged.len());
        for ri in &merged {
            signs.push(sign_at_root(p, ri)?);
        }
        signs.iter().all(|&s| s != 0) && signs.windows(2).all(|w| w[0] != w[1])
    };

    Ok(InterlacingReport { n, p_roots, q_roots, alternates, coprime, sign_shadow })
}

/// Positive roots of `P_{n+1}` and `Q_{n+1}` strictly alternate, and the
/// pairs `(P_k, Q_k)` have no common roots.
pub fn interlacing_check(n: usize) -> Result<bool> {
    Ok(interlacing_report(n)?.holds())
}

/// `−Q(t) / (t P′(t))`, exactly.
fn residue(rf: &RationalFn, dp: &IntPoly, t: &BigRational) -> Result<BigRational> {
    let den = t * dp.eval_rational(t);
    if den.is_zero() {
        return Err(Error::Resolution("vanishing derivative at a root".into()));
    }
    Ok(-rf.numerator.eval_rational(t) / den)
}

/// The measure with MGF `Q_m / P_m`: atoms are the reciprocals of the roots
/// of `P_m`, weighted by the residue at each root.
///
/// `P_m` is even and palindromic up to sign, so its root set equals its atom
/// set. Only positive roots are refined; the reciprocal of the `k`-th
/// smallest is the `k`-th largest, and negative atoms mirror positive ones.
pub fn measure_from_polys(m: usize, precision_bits: usize) -> Result<AtomicMeasure> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    check_cap("m", m, MAX_POLY_MEASURE_LEVEL)?;
    let rf = mgf_pair(m)?;
    let p = &rf.denominator;
    let rev = p.reversed();
    if !(p.is_even() && (rev == *p || rev == -p)) {
        return Err(Error::Structure(format!("P_{m} is not even and palindromic")));
    }
    let dp = p.derivative();
    let bits = precision_bits + GUARD_BITS;

    let mut roots = positive_roots(p)?;
    for ri in &mut roots {
        ri.refine(bits);
    }
    let points: Vec<BigRational> = roots.iter().map(|ri| ri.midpoint()).collect();
    let k = points.len();

    let mut atoms = Vec::with_capacity(2 * k);
    let mut weights = Vec::with_capacity(2 * k);
    for (j, atom) in points.iter().enumerate() {
        // atom = 1/t with t the mirrored root
        let w = residue(&rf, &dp, &points[k - 1 - j])?;
        if !w.is_positive() {
            return Err(Error::Resolution(format!("nonpositive residue at root {j} of P_{m}")));
        }
        atoms.push(precision::from_rational(atom, precision_bits));
        weights.push(precision::from_rational(&w, precision_bits));
    }
    let neg_atoms: Vec<Real> = atoms.iter().rev().map(|a| -a.clone()).collect();
    let neg_weights: Vec<Real> = weights.iter().rev().cloned().collect();
    let atoms = neg_atoms.into_iter().chain(atoms).collect();
    let weights = neg_weights.into_iter().chain(weights).collect();
    AtomicMeasure::new(atoms, weights, precision_bits, format!("mgf_route(m={m})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_pairs() {
        let seq = mgf_sequence(3).unwrap();
        assert_eq!(seq[0].numerator, IntPoly::one());
        assert_eq!(seq[0].denominator, IntPoly::from_i64(&[1, 0, -1]));
        assert_eq!(seq[1].denominator, IntPoly::from_i64(&[1, 0, -3, 0, 1]));
        assert_eq!(seq[1].numerator, IntPoly::from_i64(&[1, 0, -1]));
        assert_eq!(seq[2].denominator.degree(), Some(8));
        assert_eq!(seq[2].numerator.degree(), Some(6));
    }

    #[test]
    fn caps() {
        assert!(mgf_pair(9).is_err());
        assert!(mgf_pair(0).is_err());
        assert!(structure_check(8).is_err());
        assert!(interlacing_check(7).is_err());
    }

    #[test]
    fn structure() {
        for n in 1..=5 {
            assert!(structure_check(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn interlacing_base_case() {
        let r = interlacing_report(1).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.q_roots, vec![1.0]);
        assert!((r.p_roots[0] - 0.618_033_988_749_894_9).abs() < 1e-15);
        assert!((r.p_roots[1] - 1.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn interlacing_small() {
        for n in 2..=3 {
            assert!(interlacing_check(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn bernoulli_from_polys() {
        let mu = measure_from_polys(1, 128).unwrap();
        let atoms: Vec<f64> = mu.atoms().iter().map(precision::to_f64).collect();
        let weights: Vec<f64> = mu.weights().iter().map(precision::to_f64).collect();
        assert_eq!(atoms, [-1.0, 1.0]);
        assert_eq!(weights, [0.5, 0.5]);
    }

    #[test]
    fn golden_from_polys() {
        let mu = measure_from_polys(2, 128).unwrap();
        let w: Vec<f64> = mu.weights().iter().map(precision::to_f64).collect();
        let big = (5.0 + 5f64.sqrt()) / 20.0;
        let small = (5.0 - 5f64.sqrt()) / 20.0;
        for (a, b) in w.iter().zip([big, small, small, big]) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
