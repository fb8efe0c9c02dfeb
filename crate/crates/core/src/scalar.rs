//! Scalar abstraction shared by the binary64 and exact-rational table builds.

use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Field operations needed by the recurrences. Implemented for `f64` and for
/// `BigRational` so every table is built by one generic code path.
pub trait Scalar:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;

    /// The value `num / den` (`den != 0`).
    fn ratio(num: i128, den: i128) -> Self;

    /// Lossy view, used for reporting and cross-mode comparisons.
    fn to_f64(&self) -> f64;

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn ratio(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }

    fn ratio(num: i128, den: i128) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        big_rational_to_f64(self)
    }
}

/// Round-to-nearest conversion that stays accurate when numerator and
/// denominator are far too large for `f64` on their own.
pub fn big_rational_to_f64(r: &BigRational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    if numer.is_zero() {
        return 0.0;
    }
    let negative = numer.is_negative() != denom.is_negative();
    let n = numer.abs().to_biguint().expect("abs is non-negative");
    let d = denom.abs().to_biguint().expect("abs is non-negative");

    // Scale the quotient into a ~80-bit integer, convert exactly, then undo
    // the scaling with a power of two (exact in f64 up to the final rounding).
    let shift: i64 = 80 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    let q = BigInt::from_biguint(Sign::Plus, q)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    // Undo the scaling in two steps so subnormal results survive.
    let half = -shift as i32 / 2;
    let v = q * 2f64.powi(half) * 2f64.powi(-shift as i32 - half);
    if negative {
        -v
    } else {
        v
    }
}
