//! Arbitrary-precision rationals and small helpers used throughout the crate.
//!
//! `Rat` is `num_rational::BigRational`: always reduced, denominator positive.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Exact conversion; every finite f64 is a dyadic rational.
pub fn from_f64(x: f64) -> Option<Rat> {
    Rat::from_f64(x)
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Integer part of `floor(x)` as a `BigInt`.
pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil_int(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// Distance from `x` to the nearest point of `y + Z`.
pub fn circle_dist(x: &Rat, y: &Rat) -> Rat {
    let d = frac(&(x - y));
    let alt = Rat::one() - &d;
    if d <= alt {
        d
    } else {
        alt
    }
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// Renders `p/q`, or just `p` when `q == 1`.
pub fn display(x: &Rat) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    if x.denom().is_one() {
        let _ = write!(s, "{}", x.numer());
    } else {
        let _ = write!(s, "{}/{}", x.numer(), x.denom());
    }
    s
}

/// Parses `p`, `p/q`, or a plain decimal like `-0.125`.
pub fn parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int, fracpart)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let digits: Vec<u8> = fracpart.bytes().collect();
        if digits.is_empty() || !digits.iter().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let num: BigInt = fracpart.parse().ok()?;
        let mut den = BigInt::one();
        for _ in 0..digits.len() {
            den *= 10;
        }
        let f = Rat::new(num, den);
        let i = Rat::from_integer(int);
        return Some(if neg { i - f } else { i + f });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_and_floor() {
        assert_eq!(frac(&rat(-3, 2)), rat(1, 2));
        assert_eq!(floor_int(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(frac(&rat(7, 2)), rat(1, 2));
    }

    #[test]
    fn circle_distance_wraps() {
        assert_eq!(circle_dist(&rat(1, 10), &rat(9, 10)), rat(1, 5));
        assert_eq!(circle_dist(&rat(9, 10), &rat(21, 10)), rat(1, 5));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/4"), Some(rat(3, 4)));
        assert_eq!(parse("-0.125"), Some(rat(-1, 8)));
        assert_eq!(parse("5"), Some(rat_int(5)));
        assert_eq!(parse("1/0"), None);
    }

    #[test]
    fn f64_roundtrip_is_exact() {
        let x = 0.37;
        let r = from_f64(x).unwrap();
        assert_eq!(to_f64(&r), x);
    }
}
