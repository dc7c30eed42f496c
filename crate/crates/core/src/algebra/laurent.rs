use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use super::{format_rational, parse_rational, rat, Rational};

/// Laurent polynomial in `q` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

#[derive(Debug, Error, PartialEq)]
#[error("cannot parse Laurent polynomial {input:?}: {reason}")]
pub struct ParseLaurentError {
    pub input: String,
    pub reason: String,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, rat(1))
    }

    pub fn monomial(exp: i64, coeff: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(exp, rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The involution `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (-e, c.clone())))
    }

    pub fn shift(&self, by: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e + by, c.clone())))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x * c)))
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Truncation keeping exponents `<= max`.
    pub fn truncate_above(&self, max: i64) -> Self {
        Self::from_terms(self.terms.range(..=max).map(|(e, c)| (*e, c.clone())))
    }

    pub fn parse(input: &str) -> Result<Self, ParseLaurentError> {
        parse_laurent(input)
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending exponents, `q^0` suppressed, `q^-2` style exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let negative = super::rational_sign_is_negative(c);
            let mag = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{}", format_rational(&mag))?,
                1 if unit => write!(f, "q")?,
                1 => write!(f, "{}*q", format_rational(&mag))?,
                _ if unit => write!(f, "q^{}", e)?,
                _ => write!(f, "{}*q^{}", format_rational(&mag), e)?,
            }
        }
        Ok(())
    }
}

fn parse_laurent(input: &str) -> Result<LaurentPoly, ParseLaurentError> {
    let err = |reason: &str| ParseLaurentError {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty input"));
    }
    // split into signed terms; a '-' directly after '^' belongs to the exponent
    let bytes: Vec<char> = compact.chars().collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for idx in 1..bytes.len() {
        if (bytes[idx] == '+' || bytes[idx] == '-') && bytes[idx - 1] != '^' {
            terms.push(bytes[start..idx].iter().collect::<String>());
            start = idx;
        }
    }
    terms.push(bytes[start..].iter().collect::<String>());

    let mut out = LaurentPoly::zero();
    for raw in terms {
        let (sign, body) = match raw.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, raw.strip_prefix('+').unwrap_or(&raw)),
        };
        if body.is_empty() {
            return Err(err("dangling sign"));
        }
        let (coeff_str, var_part) = match body.find('q') {
            None => (body, None),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                (c, Some(&body[pos + 1..]))
            }
        };
        let coeff = if coeff_str.is_empty() {
            rat(1)
        } else {
            parse_rational(coeff_str).ok_or_else(|| err("bad coefficient"))?
        };
        let exp = match var_part {
            None => 0,
            Some("") => 1,
            Some(rest) => {
                let e = rest.strip_prefix('^').ok_or_else(|| err("expected '^' after q"))?;
                let e = e.trim_start_matches('(').trim_end_matches(')');
                e.parse::<i64>().map_err(|_| err("bad exponent"))?
            }
        };
        out.add_term(exp, coeff * rat(sign));
    }
    Ok(out)
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, -c.clone())))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_descending_with_negative_exponents() {
        let p = LaurentPoly::from_terms([(2, rat(1)), (0, rat(1)), (-2, rat(1))]);
        assert_eq!(p.to_string(), "q^2 + 1 + q^-2");
        let p = LaurentPoly::from_terms([(1, rat(-3)), (-1, super::super::ratio(1, 2))]);
        assert_eq!(p.to_string(), "-3*q + 1/2*q^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn parses_fixture_strings() {
        let p = LaurentPoly::parse("q^-2 + 1 + q^2").unwrap();
        assert_eq!(p, LaurentPoly::from_terms([(2, rat(1)), (0, rat(1)), (-2, rat(1))]));
        assert_eq!(LaurentPoly::parse("-q").unwrap(), LaurentPoly::monomial(1, rat(-1)));
        assert_eq!(LaurentPoly::parse("2/3*q^-1").unwrap().coeff(-1), super::super::ratio(2, 3));
        assert!(LaurentPoly::parse("q^x").is_err());
        assert!(LaurentPoly::parse("").is_err());
    }

    #[test]
    fn bar_is_multiplicative() {
        let a = LaurentPoly::parse("q + 2 - q^-3").unwrap();
        let b = LaurentPoly::parse("3*q^2 - q^-1").unwrap();
        assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }
}
