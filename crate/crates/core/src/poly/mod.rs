//! Exact integer polynomials and the moment-generating-function machinery
//! built on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::precision::{self, Real};

pub mod mgf;
pub mod series;
pub mod sturm;

pub use mgf::{
    interlacing_check, interlacing_report, measure_from_polys, mgf_pair, mgf_sequence,
    structure_check, InterlacingReport, RationalFn, MAX_MGF_LEVEL,
};
pub use series::{series_of, t_recurrence_check, PowerSeries, SeriesTruncation, MAX_SERIES_ORDER};
pub use sturm::{refine_root, sturm_isolate, RootInterval};

/// Dense polynomial with arbitrary-precision integer coefficients,
/// `coeffs[k]` multiplying `t^k`. Always trimmed; zero is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// `c · t^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        IntPoly::new(coeffs)
    }

    /// Clears denominators of a rational polynomial and returns the
    /// primitive integer polynomial with the same roots.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        IntPoly::new(ints).primitive_part()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Only even powers of `t` appear.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// `t^deg · p(1/t)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// `p(t) · t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Positive gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder `lc(d)^(deg p − deg d + 1) · p mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo-division by zero polynomial");
        let Some(dp) = self.degree() else {
            return IntPoly::zero();
        };
        if dp < dd {
            return self.clone();
        }
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        let mut steps = 0;
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            // r ← lc·r − lr·t^(dr−dd)·d
            r = &r.scale(&lc) - &d.scale(&lr).shift(dr - dd);
            steps += 1;
        }
        let missing = dp - dd + 1 - steps;
        if missing > 0 {
            r = r.scale(&num_traits::pow(lc, missing));
        }
        r
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_some_and(|c| c.is_negative()) {
            a = -&a;
        }
        a
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let (num, den) = self.eval_homogeneous(x);
        BigRational::new(num, den)
    }

    /// Sign of the value at a rational point: −1, 0 or 1.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let (num, _) = self.eval_homogeneous(x);
        sign_of(&num)
    }

    /// `(b^d · p(a/b), b^d)` for `x = a/b`, `b > 0`.
    fn eval_homogeneous(&self, x: &BigRational) -> (BigInt, BigInt) {
        let Some(d) = self.degree() else {
            return (BigInt::zero(), BigInt::one());
        };
        let a = x.numer();
        let b = x.denom();
        let mut acc = self.coeffs[d].clone();
        let mut bpow = BigInt::one();
        for k in (0..d).rev() {
            bpow *= b;
            acc = acc * a + &self.coeffs[k] * &bpow;
        }
        (acc, bpow)
    }

    /// Horner evaluation in binary floating point.
    pub fn eval_real(&self, x: &Real, bits: usize) -> Real {
        let mut acc = precision::from_i64(0, bits);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + precision::from_rational(&BigRational::from_integer(c.clone()), bits);
        }
        acc
    }

    pub fn dump(&self) -> PolyDump {
        PolyDump {
            degree: self.degree().map_or(-1, |d| d as i64),
            coefficients: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// JSON dump: coefficients as decimal strings, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDump {
    pub degree: i64,
    pub coefficients: Vec<String>,
}

impl TryFrom<&PolyDump> for IntPoly {
    type Error = crate::Error;

    fn try_from(dump: &PolyDump) -> crate::Result<IntPoly> {
        let coeffs = dump
            .coefficients
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| crate::Error::InvalidArgument(format!("coefficient {s:?}: {e}")))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        let p = IntPoly::new(coeffs);
        if p.degree().map_or(-1, |d| d as i64) != dump.degree {
            return Err(crate::Error::InvalidArgument("degree does not match coefficients".into()));
        }
        Ok(p)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}
