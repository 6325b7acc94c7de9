//! Configurable-precision binary reals.
//!
//! Atoms and weights are carried as [`Real`] values, binary floating point
//! numbers whose significand length is fixed per value. Conversions to and
//! from exact dyadic rationals let the polynomial engine work on the same
//! numbers without rounding.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, Sign as DSign, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Real = FBig<HalfEven, 2>;

pub const DEFAULT_PRECISION_BITS: usize = 256;

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION_BITS: usize = 53;

pub fn from_i64(x: i64, bits: usize) -> Real {
    Real::from(x).with_precision(bits).value()
}

pub fn from_f64(x: f64, bits: usize) -> Real {
    let exact = Real::try_from(x).expect("finite f64");
    exact.with_precision(bits.max(MIN_PRECISION_BITS)).value()
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn sqrt(x: &Real) -> Real {
    x.sqrt()
}

pub fn abs(x: &Real) -> Real {
    if is_negative(x) {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn is_negative(x: &Real) -> bool {
    x.repr().significand() < &IBig::ZERO
}

/// `2^-k` at the given precision.
pub fn pow2_neg(k: usize, bits: usize) -> Real {
    Real::from_parts(IBig::ONE, -(k as isize)).with_precision(bits).value()
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal_string(x: &Real, digits: usize) -> String {
    if x.repr().significand().is_zero() {
        return "0".to_string();
    }
    x.clone()
        .with_base_and_precision::<10>(digits.max(1))
        .value()
        .to_string()
}

fn ibig_to_bigint(x: &IBig) -> BigInt {
    let (sign, mag) = x.clone().into_parts();
    let bytes = mag.to_le_bytes();
    let sign = match sign {
        DSign::Positive if mag.is_zero() => Sign::NoSign,
        DSign::Positive => Sign::Plus,
        DSign::Negative => Sign::Minus,
    };
    BigInt::from_bytes_le(sign, &bytes)
}

pub(crate) fn bigint_to_ibig(x: &BigInt) -> IBig {
    let (sign, bytes) = x.to_bytes_le();
    let mag = UBig::from_le_bytes(&bytes);
    let sign = if sign == Sign::Minus { DSign::Negative } else { DSign::Positive };
    IBig::from_parts(sign, mag)
}

/// Exact value of a binary real as `(mantissa, exponent)` with value `m * 2^e`.
pub fn to_dyadic(x: &Real) -> (BigInt, isize) {
    let repr = x.repr();
    (ibig_to_bigint(repr.significand()), repr.exponent())
}

pub fn to_rational(x: &Real) -> BigRational {
    let (m, e) = to_dyadic(x);
    if e >= 0 {
        BigRational::from_integer(m << (e as usize))
    } else {
        BigRational::new(m, BigInt::one() << ((-e) as usize))
    }
}

/// Rounds an exact rational to the nearest representable value at `bits`.
pub fn from_rational(q: &BigRational, bits: usize) -> Real {
    if q.is_zero() {
        return Real::ZERO.with_precision(bits).value();
    }
    let num = q.numer();
    let den = q.denom();
    // scale so the integer quotient carries bits + 2 significant bits
    let shift = bits as i64 + 2 + den.bits() as i64 - num.abs().bits() as i64;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (num << shift as usize, den.clone())
    } else {
        (num.clone(), den << (-shift) as usize)
    };
    let quotient = &scaled_num / &scaled_den;
    let significand = bigint_to_ibig(&quotient);
    Real::from_parts(significand, -(shift as isize))
        .with_precision(bits)
        .value()
}

pub fn from_dyadic(mantissa: &BigInt, exponent: isize, bits: usize) -> Real {
    Real::from_parts(bigint_to_ibig(mantissa), exponent)
        .with_precision(bits)
        .value()
}
