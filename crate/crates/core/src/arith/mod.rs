//! Exact arithmetic kernel.
//!
//! Everything downstream is exact: big rationals, univariate polynomials
//! over the rationals and over towers of simple algebraic extensions, and
//! bivariate polynomials for the curve frontend. There is no floating
//! point anywhere in the crate.

mod bipoly;
mod ext;
mod factor;
mod finite;
mod poly;

pub use bipoly::{BiPoly, SquarefreeFactor};
pub use ext::{Elem, SimpleExtension, DEFAULT_DEPTH_LIMIT};
pub use factor::{factor_over, factor_rational};
pub use poly::UniPoly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator by `num_rational`.
pub type Rational = num_rational::BigRational;

/// Minimal field interface shared by the rationals and extension elements.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn divide(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.inverse()?))
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Shorthand for `p/q`; panics on a zero denominator.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact `floor(lambda * a)`.
pub fn floor_scale(lambda: &Rational, a: i64) -> i64 {
    let prod = lambda * rat_int(a);
    prod.floor()
        .to_integer()
        .to_i64()
        .expect("rounded coefficient fits in i64")
}

/// `floor(t)` for `t` not an integer and `t - 1` otherwise: the value of
/// `floor(s)` for `s` slightly below `t`.
pub fn floor_left(t: &Rational) -> i64 {
    let f = if t.is_integer() {
        t.to_integer() - BigInt::one()
    } else {
        t.floor().to_integer()
    };
    f.to_i64().expect("rounded coefficient fits in i64")
}

pub fn floor_left_scale(lambda: &Rational, a: i64) -> i64 {
    floor_left(&(lambda * rat_int(a)))
}

/// Ceiling of `num / den` for `den > 0`.
pub fn ceil_div(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    Integer::div_ceil(&num, &den)
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p` (optionally signed).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_scale_examples() {
        assert_eq!(floor_scale(&rat(11, 12), 8), 7);
        assert_eq!(floor_scale(&rat(1, 2), 4), 2);
        assert_eq!(floor_scale(&rat(2, 3), 12), 8);
        assert_eq!(floor_scale(&rat(7, 12), 0), 0);
    }

    #[test]
    fn floor_left_steps_down_on_integers() {
        assert_eq!(floor_left_scale(&rat(7, 12), 12), 6);
        assert_eq!(floor_left_scale(&rat(7, 12), 8), 4);
        assert_eq!(floor_left(&rat(-1, 2)), -1);
    }

    #[test]
    fn rational_text_round_trip() {
        for r in [rat(7, 12), rat(-3, 5), rat_int(4)] {
            assert_eq!(parse_rational(&fmt_rational(&r)), Some(r));
        }
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    proptest::proptest! {
        #[test]
        fn floor_scale_brackets(p in -500i64..500, q in 1i64..60, a in 0i64..400) {
            let lambda = rat(p, q);
            let f = rat_int(floor_scale(&lambda, a));
            let exact = &lambda * rat_int(a);
            proptest::prop_assert!(f <= exact);
            proptest::prop_assert!(exact - rat_int(1) < f);
        }
    }
}
