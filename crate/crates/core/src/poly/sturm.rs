//! Sturm-sequence real-root isolation with exact rational endpoints.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::IntPoly;
use crate::error::{Error, Result};
use crate::precision::{self, Real};

/// An interval `(lo, hi]` holding exactly one real root of `poly`.
///
/// `sign_change` is `+1` when `poly` goes from negative to positive across
/// the root and `-1` otherwise.
#[derive(Clone, Debug)]
pub struct RootInterval {
    pub poly: Arc<IntPoly>,
    pub lo: BigRational,
    pub hi: BigRational,
    pub sign_change: i32,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Root is known exactly when `poly(hi) = 0`.
    pub fn is_exact(&self) -> bool {
        self.poly.sign_at(&self.hi) == 0
    }

    /// Halves the interval, keeping the root inside.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            self.lo = self.hi.clone();
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        let s_mid = self.poly.sign_at(&mid);
        if s_mid == 0 || s_mid == self.poly.sign_at(&self.hi) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Bisects until the width is below `2^-bits` (or the root is hit).
    pub fn refine(&mut self, bits: usize) {
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
        while !self.is_exact() && self.width() >= target {
            self.bisect();
        }
    }

    /// Best point estimate: `hi` when exact, otherwise the midpoint.
    pub fn midpoint(&self) -> BigRational {
        if self.is_exact() {
            self.hi.clone()
        } else {
            (&self.lo + &self.hi) / BigRational::from_integer(2.into())
        }
    }

    pub fn overlaps(&self, other: &RootInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Sturm chain of a squarefree polynomial, up to positive factors.
fn sturm_chain(p: &IntPoly) -> Result<Vec<IntPoly>> {
    let mut chain = vec![p.primitive_part(), p.derivative().primitive_part()];
    loop {
        let k = chain.len();
        let (a, b) = (&chain[k - 2], &chain[k - 1]);
        if b.degree() == Some(0) {
            break;
        }
        let mut r = a.pseudo_rem(b);
        // prem carries the factor lc(b)^(δ+1); undo a negative factor
        let delta = a.degree().unwrap() - b.degree().unwrap();
        if b.leading().unwrap().is_negative() && (delta + 1) % 2 == 1 {
            r = -&r;
        }
        if r.is_zero() {
            return Err(Error::Structure(format!(
                "polynomial is not squarefree: gcd with its derivative has degree {}",
                b.degree().unwrap()
            )));
        }
        chain.push((-&r).primitive_part());
    }
    Ok(chain)
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut prev = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

fn variations_at(chain: &[IntPoly], x: &BigRational) -> usize {
    variations(chain.iter().map(|q| q.sign_at(x)))
}

/// Power of two strictly exceeding every root modulus (Cauchy bound).
fn root_bound(p: &IntPoly) -> BigRational {
    let lead = p.leading().unwrap().abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    // 1 + max/lead < 2^k
    let ratio = (max + &lead - 1u32) / &lead + 1u32;
    let k = ratio.bits() as usize;
    BigRational::from_integer(BigInt::one() << k)
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn count_roots(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    let chain = sturm_chain(p)?;
    Ok(variations_at(&chain, lo).saturating_sub(variations_at(&chain, hi)))
}

/// Pairwise-disjoint isolating intervals for every real root of `p`, sorted.
///
/// `p` must be squarefree; a repeated factor is reported as a structural
/// error. Endpoints are dyadic rationals and 0 is always an endpoint, so
/// positive and negative roots are separated.
pub fn sturm_isolate(p: &IntPoly) -> Result<Vec<RootInterval>> {
    let degree = p
        .degree()
        .ok_or_else(|| Error::InvalidArgument("cannot isolate roots of the zero polynomial".into()))?;
    let poly = Arc::new(p.clone());
    if degree == 0 {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(p)?;
    let bound = root_bound(p);
    let two = BigRational::from_integer(2.into());

    let mut out = Vec::new();
    let lo = -bound.clone();
    let hi = bound;
    let (v_lo, v_hi) = (variations_at(&chain, &lo), variations_at(&chain, &hi));
    let mut stack = vec![(lo, v_lo, hi, v_hi)];
    while let Some((lo, v_lo, hi, v_hi)) = stack.pop() {
        let count = v_lo - v_hi;
        if count == 0 {
            continue;
        }
        if count == 1 {
            // simple root: the sign just right of it is the derivative's sign there
            let s_hi = match p.sign_at(&hi) {
                0 => p.derivative().sign_at(&hi),
                s => s,
            };
            out.push(RootInterval { poly: poly.clone(), lo, hi, sign_change: s_hi });
            continue;
        }
        let mid = (&lo + &hi) / &two;
        let v_mid = variations_at(&chain, &mid);
        stack.push((mid.clone(), v_mid, hi, v_hi));
        stack.push((lo, v_lo, mid, v_mid));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Bisects an isolating interval below `2^-bits` and returns its midpoint
/// (or the exact root when bisection lands on it).
pub fn refine_root(interval: &RootInterval, bits: usize) -> Real {
    let mut ri = interval.clone();
    ri.refine(bits);
    precision::from_rational(&ri.midpoint(), bits + 16)
}

/// Refines overlapping isolating intervals of different polynomials until
/// all are pairwise disjoint. Roots must be distinct.
pub fn separate(intervals: &mut [RootInterval]) {
    loop {
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut clean = true;
        for k in 1..intervals.len() {
            if intervals[k - 1].overlaps(&intervals[k]) {
                clean = false;
                intervals[k - 1].bisect();
                intervals[k].bisect();
            }
        }
        if clean {
            return;
        }
    }
}

/// Sign of `poly` at an isolated root of another polynomial, resolved by
/// refining until the interval excludes every root of `poly`.
pub fn sign_at_root(poly: &IntPoly, root: &RootInterval) -> Result<i32> {
    let mut ri = root.clone();
    for _ in 0..4096 {
        if ri.is_exact() {
            return Ok(poly.sign_at(&ri.hi));
        }
        let s_lo = poly.sign_at(&ri.lo);
        if s_lo != 0 && s_lo == poly.sign_at(&ri.hi) && count_roots(poly, &ri.lo, &ri.hi)? == 0 {
            return Ok(s_lo);
        }
        ri.bisect();
    }
    Err(Error::Resolution("could not separate root from the other polynomial".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::to_f64;
    use num_traits::Zero;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn bernoulli_polynomial() {
        let roots = sturm_isolate(&p(&[1, 0, -1])).unwrap();
        assert_eq!(roots.len(), 2);
        let vals: Vec<f64> = roots.iter().map(|r| to_f64(&refine_root(r, 60))).collect();
        assert_eq!(vals, vec![-1.0, 1.0]);
        assert_eq!((roots[0].sign_change, roots[1].sign_change), (1, -1));
        // exact detection at t = 1
        let mut ri = roots[1].clone();
        ri.refine(200);
        assert!(ri.is_exact());
        assert_eq!(ri.hi, BigRational::one());
    }

    #[test]
    fn golden_ratio_roots() {
        let roots = sturm_isolate(&p(&[1, 0, -3, 0, 1])).unwrap();
        assert_eq!(roots.len(), 4);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let psi = phi - 1.0;
        let want = [-phi, -psi, psi, phi];
        for (r, w) in roots.iter().zip(want) {
            assert!((to_f64(&refine_root(r, 80)) - w).abs() < 1e-15);
        }
    }

    #[test]
    fn refine_to_128_bits() {
        let roots = sturm_isolate(&p(&[1, 0, -3, 0, 1])).unwrap();
        let top = refine_root(roots.last().unwrap(), 128);
        let five = precision::from_i64(5, 200);
        let phi = (precision::sqrt(&five) + precision::from_i64(1, 200)) / precision::from_i64(2, 200);
        let err = precision::abs(&(top - &phi));
        assert!(err < precision::pow2_neg(127, 200));
        assert!(precision::to_decimal_string(&phi, 20).starts_with("1.6180339887498948482"));
    }

    #[test]
    fn non_squarefree_is_rejected() {
        let sq = &p(&[-1, 1]) * &p(&[-1, 1]);
        assert!(matches!(sturm_isolate(&sq), Err(Error::Structure(_))));
    }

    #[test]
    fn polynomial_without_real_roots() {
        assert!(sturm_isolate(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn root_counting() {
        let poly = p(&[1, 0, -3, 0, 1]);
        let zero = BigRational::zero();
        let big = BigRational::from_integer(10.into());
        assert_eq!(count_roots(&poly, &zero, &big).unwrap(), 2);
        assert_eq!(count_roots(&poly, &-big, &zero).unwrap(), 2);
    }

    #[test]
    fn negative_leading_coefficient() {
        // −(t−1)(t−2)(t−3)
        let poly = -&(&(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1]));
        let roots = sturm_isolate(&poly).unwrap();
        let vals: Vec<f64> = roots.iter().map(|r| to_f64(&refine_root(r, 60))).collect();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }
}
