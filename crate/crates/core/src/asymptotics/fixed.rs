//! Fixed-point decimals on `BigInt`, used for high-precision evaluation of
//! truncated series and root finding. A `Fixed` with scale `s` stores
//! `value * 10^-s`; every operation rounds to nearest (ties away from zero),
//! so each step contributes at most one ulp of error at the working scale.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::scalar::big_rational_to_f64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    scale: u32,
    value: BigInt,
}

fn pow10(scale: u32) -> BigInt {
    BigInt::from(10u8).pow(scale)
}

/// `num / den` rounded to nearest, ties away from zero. `den > 0`.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den.is_positive());
    let (q, r) = num.div_rem(den);
    if &r.abs() * 2 >= *den {
        if num.is_negative() {
            q - BigInt::from(1)
        } else {
            q + BigInt::from(1)
        }
    } else {
        q
    }
}

impl Fixed {
    pub fn zero(scale: u32) -> Self {
        Self {
            scale,
            value: BigInt::zero(),
        }
    }

    pub fn one(scale: u32) -> Self {
        Self {
            scale,
            value: pow10(scale),
        }
    }

    pub fn from_int(v: i64, scale: u32) -> Self {
        Self {
            scale,
            value: BigInt::from(v) * pow10(scale),
        }
    }

    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        Self {
            scale,
            value: div_round(&(r.numer() * pow10(scale)), r.denom()),
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    fn assert_same_scale(&self, rhs: &Self) {
        assert_eq!(self.scale, rhs.scale, "mixed fixed-point scales");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_same_scale(rhs);
        Self {
            scale: self.scale,
            value: &self.value + &rhs.value,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.assert_same_scale(rhs);
        Self {
            scale: self.scale,
            value: &self.value - &rhs.value,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_scale(rhs);
        Self {
            scale: self.scale,
            value: div_round(&(&self.value * &rhs.value), &pow10(self.scale)),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.assert_same_scale(rhs);
        assert!(!rhs.value.is_zero(), "fixed-point division by zero");
        let num = &self.value * pow10(self.scale);
        let value = if rhs.value.is_negative() {
            -div_round(&num, &-rhs.value.clone())
        } else {
            div_round(&num, &rhs.value)
        };
        Self {
            scale: self.scale,
            value,
        }
    }

    pub fn div_int(&self, rhs: i64) -> Self {
        assert!(rhs != 0);
        let value = if rhs < 0 {
            -div_round(&self.value, &BigInt::from(-rhs))
        } else {
            div_round(&self.value, &BigInt::from(rhs))
        };
        Self {
            scale: self.scale,
            value,
        }
    }

    pub fn mul_int(&self, rhs: i64) -> Self {
        Self {
            scale: self.scale,
            value: &self.value * BigInt::from(rhs),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            scale: self.scale,
            value: -self.value.clone(),
        }
    }

    /// Floor `r`-th root of a non-negative value (error below one ulp).
    pub fn nth_root(&self, r: u32) -> Self {
        assert!(!self.value.is_negative(), "root of a negative value");
        assert!(r >= 1);
        let scaled = &self.value * pow10(self.scale * (r - 1));
        let root = scaled
            .to_biguint()
            .expect("non-negative by assertion")
            .nth_root(r);
        Self {
            scale: self.scale,
            value: BigInt::from(root),
        }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Fixed::one(self.scale);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Change the working scale, rounding on contraction.
    pub fn rescale(&self, scale: u32) -> Self {
        if scale >= self.scale {
            Self {
                scale,
                value: &self.value * pow10(scale - self.scale),
            }
        } else {
            Self {
                scale,
                value: div_round(&self.value, &pow10(self.scale - scale)),
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        big_rational_to_f64(&BigRational::new(self.value.clone(), pow10(self.scale)))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.value.clone(), pow10(self.scale))
    }

    /// Decimal string with exactly `places` digits after the point, rounded
    /// to nearest.
    pub fn to_decimal(&self, places: u32) -> String {
        Self::render(self.rescale(places))
    }

    /// Decimal string with exactly `places` digits after the point,
    /// truncated toward zero (the convention of the published tables).
    pub fn to_decimal_trunc(&self, places: u32) -> String {
        let at = if places >= self.scale {
            self.rescale(places)
        } else {
            Fixed {
                scale: places,
                value: &self.value / pow10(self.scale - places),
            }
        };
        Self::render(at)
    }

    fn render(at: Fixed) -> String {
        let places = at.scale;
        let sign = if at.value.is_negative() { "-" } else { "" };
        let digits = at.value.abs().to_string();
        let digits = if digits.len() <= places as usize {
            format!("{:0>width$}", digits, width = places as usize + 1)
        } else {
            digits
        };
        let split = digits.len() - places as usize;
        if places == 0 {
            format!("{sign}{digits}")
        } else {
            format!("{sign}{}.{}", &digits[..split], &digits[split..])
        }
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.assert_same_scale(other);
        self.value.partial_cmp(&other.value)
    }
}

/// `1/e` at the given scale (alternating factorial series, evaluated with
/// ten guard digits).
pub fn inv_e(scale: u32) -> Fixed {
    let work = scale + 10;
    let mut sum = Fixed::zero(work);
    let mut term = Fixed::one(work);
    let mut k: i64 = 1;
    loop {
        sum = sum.add(&term);
        term = term.div_int(-k);
        if term.value.is_zero() {
            break;
        }
        k += 1;
    }
    sum.rescale(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trip() {
        let a = Fixed::from_int(3, 20).div_int(4); // 0.75
        let b = Fixed::from_int(1, 20).div_int(2); // 0.5
        assert_eq!(a.mul(&b).to_f64(), 0.375);
        assert_eq!(a.add(&b).to_f64(), 1.25);
        assert_eq!(a.sub(&b).to_f64(), 0.25);
        assert_eq!(a.div(&b).to_f64(), 1.5);
    }

    #[test]
    fn roots() {
        let two = Fixed::from_int(2, 30);
        let sqrt2 = two.nth_root(2);
        assert!((sqrt2.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-12);
        let x = Fixed::from_int(27, 30).div_int(8);
        assert!((x.nth_root(3).to_f64() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn decimal_strings() {
        let x = Fixed::from_int(1, 12).div_int(3);
        assert_eq!(x.to_decimal(6), "0.333333");
        let y = Fixed::from_int(-5, 12).div_int(4);
        assert_eq!(y.to_decimal(3), "-1.250");
        // rounding at the cut digit
        let z = Fixed::from_int(2, 12).div_int(3);
        assert_eq!(z.to_decimal(4), "0.6667");
    }

    #[test]
    fn inverse_e() {
        let e1 = inv_e(40);
        assert!((e1.to_f64() - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(&e1.to_decimal(15), "0.367879441171442");
    }

    #[test]
    fn truncated_decimals() {
        let x = Fixed::from_int(2, 12).div_int(3);
        assert_eq!(x.to_decimal_trunc(4), "0.6666");
        let y = Fixed::from_int(-5, 12).div_int(4);
        assert_eq!(y.to_decimal_trunc(1), "-1.2");
        assert_eq!(Fixed::from_int(1, 6).to_decimal_trunc(3), "1.000");
    }

    #[test]
    fn rounding_is_to_nearest() {
        // 0.15 at scale 1 rounds away from zero.
        let x = Fixed::from_int(15, 2).div_int(100).rescale(1);
        assert_eq!(x.to_decimal(1), "0.2");
        let y = Fixed::from_int(-15, 2).div_int(100).rescale(1);
        assert_eq!(y.to_decimal(1), "-0.2");
    }
}
