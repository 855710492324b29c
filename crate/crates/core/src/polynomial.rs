use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Laurent polynomial in one variable with integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// coefficient-wise equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly<const VAR: char> {
    terms: BTreeMap<i64, i64>,
}

/// Polynomial in `t` (intersection index polynomial).
pub type IntPolynomial = Poly<'t'>;
/// Laurent polynomial in `A` (normalized bracket).
pub type LaurentPolynomial = Poly<'A'>;

impl<const VAR: char> Poly<VAR> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (coeff, exp) in terms {
            p.add_term(coeff, exp);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&1)
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Multiplies by `VAR^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Poly {
            terms: self.terms.iter().map(|(&e, &c)| (e + shift, c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl<const VAR: char> Add for &Poly<VAR> {
    type Output = Poly<VAR>;
    fn add(self, rhs: &Poly<VAR>) -> Poly<VAR> {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(c, e);
        }
        out
    }
}

impl<const VAR: char> Sub for &Poly<VAR> {
    type Output = Poly<VAR>;
    fn sub(self, rhs: &Poly<VAR>) -> Poly<VAR> {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(-c, e);
        }
        out
    }
}

impl<const VAR: char> Neg for &Poly<VAR> {
    type Output = Poly<VAR>;
    fn neg(self) -> Poly<VAR> {
        Poly {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl<const VAR: char> Mul for &Poly<VAR> {
    type Output = Poly<VAR>;
    fn mul(self, rhs: &Poly<VAR>) -> Poly<VAR> {
        let mut out = Poly::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl<const VAR: char> fmt::Display for Poly<VAR> {
    /// Terms sorted by decreasing exponent, e.g. `2*t^1 + -2*t^0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&e, &c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}*{}^{}", c, VAR, e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        let p = IntPolynomial::from_terms([(2, 1), (-2, 0)]);
        assert_eq!(p.to_string(), "2*t^1 + -2*t^0");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        let q = LaurentPolynomial::from_terms([(-1, -16), (1, -12), (1, -4)]);
        assert_eq!(q.to_string(), "1*A^-4 + 1*A^-12 + -1*A^-16");
    }

    #[test]
    fn no_zero_terms_survive() {
        let mut p = IntPolynomial::monomial(3, 2);
        p.add_term(-3, 2);
        assert!(p.is_zero());
        assert_eq!(p, IntPolynomial::zero());
    }

    #[test]
    fn arithmetic() {
        let d = LaurentPolynomial::from_terms([(-1, 2), (-1, -2)]);
        let sq = d.pow(2);
        assert_eq!(sq, LaurentPolynomial::from_terms([(1, 4), (2, 0), (1, -4)]));
        assert!((&sq - &sq).is_zero());
        assert_eq!(d.shift(1), LaurentPolynomial::from_terms([(-1, 3), (-1, -1)]));
        assert!(LaurentPolynomial::one().is_one());
        assert_eq!(&-&d + &d, LaurentPolynomial::zero());
    }
}
