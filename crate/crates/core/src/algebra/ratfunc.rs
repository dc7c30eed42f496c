use std::fmt;


use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{rat, Field, LaurentPoly, Rational};

/// Dense univariate polynomial `c_0 + c_1 q + ...`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensePoly(Vec<Rational>);

impl DensePoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn one() -> Self {
        Self(vec![rat(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("lead of zero polynomial")
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self(vec![]);
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() < d.0.len() {
            return (Self(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let lead_inv = d.lead().recip();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        Self(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.0.iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }

    /// Splits a Laurent polynomial into `q^shift * poly` with `poly(0) != 0`.
    pub fn from_laurent(p: &LaurentPoly) -> (i64, Self) {
        let Some(lo) = p.min_exp() else {
            return (0, Self(vec![]));
        };
        let hi = p.max_exp().unwrap();
        let mut c = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, x) in p.terms() {
            c[(e - lo) as usize] = x.clone();
        }
        (lo, Self::new(c))
    }
}

/// Element of `Q(q)`: a Laurent numerator over a monic denominator with nonzero
/// constant term, reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: DensePoly,
}

impl RatFunc {
    pub fn from_laurent(p: LaurentPoly) -> Self {
        Self { num: p, den: DensePoly::one() }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (dshift, dpoly) = DensePoly::from_laurent(&den);
        Self::reduce(num.shift(-dshift), dpoly)
    }

    fn reduce(num: LaurentPoly, den: DensePoly) -> Self {
        if num.is_zero() {
            return Self { num, den: DensePoly::one() };
        }
        let (nshift, npoly) = DensePoly::from_laurent(&num);
        let g = DensePoly::gcd(&npoly, &den);
        let (nq, _) = npoly.div_rem(&g);
        let (dq, _) = den.div_rem(&g);
        let lead = dq.coeffs().last().unwrap().clone();
        let inv = lead.recip();
        let num = nq.to_laurent().shift(nshift).scale(&inv);
        Self { num, den: dq.monic() }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &DensePoly {
        &self.den
    }

    /// The Laurent polynomial this equals, if the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    /// Value at `q = 1`, when defined.
    pub fn at_one(&self) -> Option<Rational> {
        let d = self.den.eval(&rat(1));
        (!d.is_zero()).then(|| self.num.at_one() / d)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::from_laurent(LaurentPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den);
        }
        let a = &self.num * &o.den.to_laurent();
        let b = &o.num * &self.den.to_laurent();
        Self::reduce(&a + &b, self.den.mul(&o.den))
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::reduce(&self.num * &o.num, self.den.mul(&o.den))
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        Self { num: -self.num, den: self.den }
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.to_laurent(), self.num.clone())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeffs()[0] == rat(1) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den.to_laurent())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_integer_quotient_reduces() {
        // (q^2 - q^-2) / (q - q^-1) = q + q^-1
        let num = LaurentPoly::parse("q^2 - q^-2").unwrap();
        let den = LaurentPoly::parse("q - q^-1").unwrap();
        let r = RatFunc::new(num, den);
        assert_eq!(r.as_laurent().unwrap(), &LaurentPoly::parse("q + q^-1").unwrap());
    }

    #[test]
    fn field_inverse_roundtrip() {
        let a = RatFunc::new(LaurentPoly::parse("q + 2").unwrap(), LaurentPoly::parse("q^2 - 3").unwrap());
        assert_eq!(a.clone() * a.inv(), RatFunc::one());
        assert_eq!(a.clone() - a.clone(), RatFunc::zero());
        assert_eq!(a.at_one(), Some(rat(3) / rat(-2)));
    }
}
