use std::collections::BTreeMap;
use std::fmt;

use super::poly::Degree;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Univariate Laurent polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    pub fn monomial(exp: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPolynomial { terms }
    }

    /// `x^exp`.
    pub fn x_pow(exp: i64) -> Self {
        Self::monomial(exp, Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut out = LaurentPolynomial::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    /// Coefficients starting at `x^0`.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64, Rational::from_int(c))),
        )
    }

    /// `1 + x + ... + x^(n-1)`.
    pub fn geometric(n: u32) -> Self {
        Self::from_terms((0..n as i64).map(|e| (e, Rational::one())))
    }

    /// `(1 - x)^k`.
    pub fn one_minus_x_pow(k: u32) -> Self {
        let base = LaurentPolynomial::from_coeffs(&[1, -1]);
        base.pow(k)
    }

    pub fn add_term(&mut self, exp: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map_or(Degree::MinusInfinity, |&e| Degree::Finite(e))
    }

    /// Lowest exponent present.
    pub fn low_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.low_degree().is_none_or(|e| e >= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, &-c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at `x = v`; `v` must be nonzero when negative exponents occur.
    pub fn evaluate(&self, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut p = Rational::one();
            let base = if *e < 0 { v.recip() } else { v.clone() };
            for _ in 0..e.unsigned_abs() {
                p *= &base;
            }
            acc += &(c * &p);
        }
        acc
    }

    /// Exact quotient `self / d`. Powers of `x` are units, so divisibility
    /// reduces to polynomial divisibility of the parts with nonzero
    /// constant term.
    pub fn exact_divide(&self, d: &Self) -> Result<Self> {
        let d_low = d
            .low_degree()
            .ok_or_else(|| Error::Structural("division by zero Laurent polynomial".into()))?;
        let Some(n_low) = self.low_degree() else {
            return Ok(Self::zero());
        };
        let dn = d.shift(-d_low);
        let mut rem = self.shift(-n_low);
        let d_deg = dn.degree().finite().unwrap();
        let d_lead = dn.leading_coeff();
        let mut q = LaurentPolynomial::zero();
        while let Degree::Finite(r_deg) = rem.degree() {
            if r_deg < d_deg {
                break;
            }
            let c = &rem.leading_coeff() / &d_lead;
            let e = r_deg - d_deg;
            rem = rem.sub(&dn.shift(e).scale(&c));
            q.add_term(e, &c);
        }
        if !rem.is_zero() {
            return Err(Error::NonDivisible {
                remainder: rem.shift(n_low),
            });
        }
        Ok(q.shift(n_low - d_low))
    }

    /// Coefficient list `[c_lo, ..., c_hi]` from `lo` to `hi` inclusive.
    pub fn coeff_range(&self, lo: i64, hi: i64) -> Vec<Rational> {
        (lo..=hi).map(|e| self.coeff(e)).collect()
    }

    /// Coefficients from `x^0` to the degree, as integers when possible.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        if !self.is_polynomial() {
            return None;
        }
        match self.degree() {
            Degree::MinusInfinity => Some(vec![]),
            Degree::Finite(d) => (0..=d).map(|e| self.coeff(e).to_i64()).collect(),
        }
    }

    pub fn render_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match *e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }

    /// JSON terms `{"c": "num/den", "e": [exp]}`.
    pub fn to_json_terms(&self) -> Vec<serde_json::Value> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| serde_json::json!({"c": c.to_fraction_string(), "e": [e]}))
            .collect()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with("x"))
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sum_division() {
        let n = LaurentPolynomial::from_coeffs(&[-1, 0, 0, 0, 1]);
        let d = LaurentPolynomial::from_coeffs(&[-1, 1]);
        assert_eq!(n.exact_divide(&d).unwrap(), LaurentPolynomial::geometric(4));
    }

    #[test]
    fn laurent_division() {
        let q = LaurentPolynomial::x_pow(2)
            .exact_divide(&LaurentPolynomial::x_pow(3))
            .unwrap();
        assert_eq!(q, LaurentPolynomial::x_pow(-1));
    }

    #[test]
    fn non_divisible_carries_remainder() {
        let n = LaurentPolynomial::from_coeffs(&[1, 1]);
        let d = LaurentPolynomial::from_coeffs(&[-1, 1]);
        match n.exact_divide(&d) {
            Err(Error::NonDivisible { remainder }) => {
                assert_eq!(remainder, LaurentPolynomial::from_coeffs(&[2]))
            }
            other => panic!("expected NonDivisible, got {other:?}"),
        }
    }

    #[test]
    fn rendering() {
        let p = LaurentPolynomial::from_coeffs(&[1, 3, 5, 4, 1]);
        assert_eq!(p.render_with("x"), "x^4 + 4*x^3 + 5*x^2 + 3*x + 1");
        let q = LaurentPolynomial::from_terms([(-1, Rational::from_int(-4)), (0, Rational::one())]);
        assert_eq!(q.to_string(), "1 - 4*x^-1");
    }
}
