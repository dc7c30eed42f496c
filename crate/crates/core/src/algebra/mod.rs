//! Exact scalar and polynomial arithmetic shared by every layer.

mod laurent;
mod matrix;
mod ratfunc;

pub use laurent::{LaurentPoly, ParseLaurentError};
pub use matrix::{Echelon, Matrix};
pub use ratfunc::{DensePoly, RatFunc};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::ops::{Neg, Sub};

use num_traits::{One, Signed, Zero};

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Commutative ring with owned arithmetic; blanket-implemented.
pub trait Ring:
    Clone + PartialEq + std::fmt::Debug + Zero + One + Sub<Output = Self> + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + std::fmt::Debug + Zero + One + Sub<Output = T> + Neg<Output = T>
{
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.clone() * other.inv()
    }
}

impl Field for Rational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// Prints `n` or `n/d`; the inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub(crate) fn rational_sign_is_negative(r: &Rational) -> bool {
    r.is_negative()
}
