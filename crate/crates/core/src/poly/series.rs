//! Truncated formal power series with exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{IntPoly, RationalFn};
use crate::error::{check_cap, Error, Result};

pub const MAX_SERIES_ORDER: usize = 64;

/// Power series truncated after `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

/// The first `K + 1` Taylor coefficients of an MGF-type series.
pub type SeriesTruncation = PowerSeries;

impl PowerSeries {
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        PowerSeries { coeffs }
    }

    pub fn from_poly(p: &IntPoly, order: usize) -> Self {
        let coeffs = (0..=order).map(|k| BigRational::from_integer(p.coeff(k))).collect();
        PowerSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::from_poly(&IntPoly::one(), order)
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        PowerSeries::from_poly(&IntPoly::from_i64(&[0, 1]), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    /// Coefficients as integers, or `None` if any is fractional.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        PowerSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        PowerSeries { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroDivision("power series with zero constant term".into()));
        }
        let n = self.order();
        let mut inv: Vec<BigRational> = Vec::with_capacity(n + 1);
        inv.push(c0.recip());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv[k - j];
            }
            inv.push(-acc / c0);
        }
        Ok(PowerSeries { coeffs: inv })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `f(t) ↦ f(t²)`, keeping the same truncation order.
    pub fn substitute_square(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if 2 * k > n {
                break;
            }
            coeffs[2 * k] = c.clone();
        }
        PowerSeries { coeffs }
    }
}

/// Taylor coefficients of `Q/P` up to `t^order` by exact long division.
pub fn series_of(rf: &RationalFn, order: usize) -> Result<SeriesTruncation> {
    check_cap("series order", order, MAX_SERIES_ORDER)?;
    let num = PowerSeries::from_poly(&rf.numerator, order);
    let den = PowerSeries::from_poly(&rf.denominator, order);
    num.div(&den)
}

/// `T_1, …, T_m` via `T_m = 1/(1 − t − t Σ_{k<m} T_k)`.
pub fn t_series_additive(m: usize, order: usize) -> Result<Vec<PowerSeries>> {
    let t = PowerSeries::t(order);
    let one = PowerSeries::one(order);
    let mut out: Vec<PowerSeries> = Vec::with_capacity(m);
    let mut sum = PowerSeries::new(Vec::new(), order);
    for _ in 0..m {
        let den = one.sub(&t).sub(&t.mul(&sum));
        let next = den.inverse()?;
        sum = sum.add(&next);
        out.push(next);
    }
    Ok(out)
}

/// `T_1, …, T_m` via `T_{k+1} = T_k / (1 − t T_k²)`.
pub fn t_series_multiplicative(m: usize, order: usize) -> Result<Vec<PowerSeries>> {
    let t = PowerSeries::t(order);
    let one = PowerSeries::one(order);
    let mut out = Vec::with_capacity(m);
    let mut cur = one.sub(&t).inverse()?;
    for _ in 0..m {
        out.push(cur.clone());
        let den = one.sub(&t.mul(&cur.mul(&cur)));
        cur = cur.div(&den)?;
    }
    Ok(out)
}

/// Both `T_m` recurrences agree to order `K`, and `T_m(t²)` equals the
/// series of `Q_m/P_m`.
pub fn t_recurrence_check(m: usize, order: usize) -> Result<bool> {
    check_cap("m", m, super::mgf::MAX_MGF_LEVEL)?;
    check_cap("series order", order, MAX_SERIES_ORDER)?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let additive = t_series_additive(m, order)?;
    let multiplicative = t_series_multiplicative(m, order)?;
    if additive != multiplicative {
        return Ok(false);
    }
    let from_polys = series_of(&super::mgf_pair(m)?, order)?;
    Ok(additive[m - 1].substitute_square() == from_polys)
}
