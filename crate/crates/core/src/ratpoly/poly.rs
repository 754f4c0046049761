use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::monomial::{default_names, Monomial};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Degree of a polynomial; the zero polynomial has degree `MinusInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    MinusInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Sparse polynomial over the rationals. Terms are kept sorted by
/// decreasing grevlex order with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

/// JSON term `{"c": "num/den", "e": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Polynomial { nvars, terms }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::variable(nvars, i), Rational::one())
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear_form(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Monomial::variable(n, i), Rational::from_int(c))),
        )
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: Vec<(Monomial, Rational)> = terms.into_iter().collect();
        for (m, _) in &acc {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
        }
        acc.sort_by(|a, b| b.0.cmp_grevlex(&a.0));
        let mut terms: Vec<(Monomial, Rational)> = Vec::with_capacity(acc.len());
        for (m, c) in acc {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, terms }
    }

    pub(crate) fn from_sorted_unchecked(nvars: usize, terms: Vec<(Monomial, Rational)>) -> Self {
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .iter()
            .map(|(m, _)| m.degree() as i64)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant term.
    pub fn constant_coeff(&self) -> Rational {
        self.terms
            .last()
            .filter(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp_grevlex(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Structural(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.try_add(other).expect("polynomial arity")
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.try_sub(other).expect("polynomial arity")
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.try_mul(other).expect("polynomial arity")
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp_grevlex(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })),
        );
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut acc: BTreeMap<MonoKey, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                *acc.entry(MonoKey(m)).or_insert_with(Rational::zero) += &c;
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.0, c))
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by `c * m`; preserves term order.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(i) > 0)
            .map(|(m, c)| {
                let e = m.exponent(i);
                let mut exps = m.exponents();
                exps[i] -= 1;
                (
                    Monomial::from_exponents(&exps),
                    c * &Rational::from_int(e as i64),
                )
            });
        Polynomial::from_terms(self.nvars, terms)
    }

    /// Multivariate division by a single divisor: returns `(q, r)` with
    /// `self = q*d + r` and no term of `r` divisible by the lead of `d`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_arity(d)?;
        let (lm, lc) = d
            .leading_term()
            .ok_or_else(|| Error::Structural("division by zero polynomial".into()))?
            .clone();
        let mut q = Vec::new();
        let mut r = Vec::new();
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.first().cloned() {
            if lm.divides(&m) {
                let qm = m.div(&lm);
                let qc = &c / &lc;
                p = p.sub(&d.mul_term(&qm, &qc));
                q.push((qm, qc));
            } else {
                r.push((m, c));
                p.terms.remove(0);
            }
        }
        Ok((
            Polynomial::from_terms(self.nvars, q),
            Polynomial::from_sorted_unchecked(self.nvars, r),
        ))
    }

    pub fn is_divisible_by(&self, d: &Polynomial) -> Result<bool> {
        Ok(self.div_rem(d)?.1.is_zero())
    }

    /// Evaluation at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    v *= x;
                }
            }
            acc += &v;
        }
        acc
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .cloned()
                .collect(),
        }
    }

    /// Renders with graded-lex term order and explicit signs.
    pub fn render_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<&(Monomial, Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp_glex(&a.0));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&format!("{}*{}", a, m.render(names)));
            }
        }
        out
    }

    pub fn render(&self) -> String {
        self.render_with(&default_names(self.nvars))
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        let mut terms: Vec<&(Monomial, Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp_glex(&a.0));
        terms
            .into_iter()
            .map(|(m, c)| TermJson {
                c: c.to_fraction_string(),
                e: m.exponents(),
            })
            .collect()
    }

    pub fn from_json_terms(nvars: usize, terms: &[TermJson]) -> Result<Polynomial> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.e.len() != nvars {
                return Err(Error::Structural(format!(
                    "term has {} exponents, expected {nvars}",
                    t.e.len()
                )));
            }
            let c: Rational = t.c.parse().map_err(Error::Input)?;
            out.push((Monomial::from_exponents(&t.e), c));
        }
        Ok(Polynomial::from_terms(nvars, out))
    }

    /// Parses integer-coefficient expressions in `x1..xl` built from
    /// `+ - * ^` and parentheses.
    pub fn parse(nvars: usize, text: &str) -> Result<Polynomial> {
        super::parse::parse_polynomial(nvars, text)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Monomial wrapper ordered by grevlex so it can key a `BTreeMap`.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct MonoKey(pub Monomial);

impl PartialOrd for MonoKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonoKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp_grevlex(&other.0)
    }
}

/// Determinant of a square polynomial matrix by cofactor expansion over
/// column subsets (memoized on the set of used columns).
pub fn determinant(rows: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = rows.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    assert!(n <= 20, "determinant too large");
    // minors[mask] = det of the last popcount(mask) rows restricted to columns in mask
    let mut minors: Vec<Option<Polynomial>> = vec![None; 1 << n];
    minors[0] = Some(Polynomial::one(nvars));
    let mut masks: Vec<usize> = (1..(1usize << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let k = mask.count_ones() as usize;
        let row = &rows[n - k];
        let mut acc = Polynomial::zero(nvars);
        let mut sign_pos = 0;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &row[col];
            if !entry.is_zero() {
                let sub = minors[mask & !(1 << col)].as_ref().unwrap();
                if !sub.is_zero() {
                    let prod = entry.mul(sub);
                    acc = if sign_pos % 2 == 0 {
                        acc.add(&prod)
                    } else {
                        acc.sub(&prod)
                    };
                }
            }
            sign_pos += 1;
        }
        minors[mask] = Some(acc);
    }
    minors[(1 << n) - 1].take().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Polynomial {
        Polynomial::parse(n, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p(2, "x1 + x2");
        let b = p(2, "x1 - x2");
        assert_eq!(a.mul(&b), p(2, "x1^2 - x2^2"));
    }

    #[test]
    fn absorbing_zero() {
        let a = p(2, "3*x1^2 - x2 + 7");
        assert!(a.mul(&Polynomial::zero(2)).is_zero());
        assert_eq!(Polynomial::zero(2).degree(), Degree::MinusInfinity);
        assert!(Degree::MinusInfinity < Degree::Finite(-5));
    }

    #[test]
    fn geometric_expansion() {
        let a = p(1, "1 + x1");
        let b = p(1, "1 + x1 + x1^2 + x1^3");
        assert_eq!(a.mul(&b), p(1, "1 + 2*x1 + 2*x1^2 + 2*x1^3 + x1^4"));
    }

    #[test]
    fn arity_mismatch_is_structural() {
        let a = Polynomial::one(2);
        let b = Polynomial::one(3);
        assert!(matches!(a.try_mul(&b), Err(Error::Structural(_))));
    }

    #[test]
    fn render_graded_lex_with_signs() {
        let a = p(3, "x3 - 2*x1*x2 + x1^2 - 1");
        assert_eq!(a.render(), "x1^2 - 2*x1*x2 + x3 - 1");
        assert_eq!(p(2, "-x2").render(), "-x2");
        let half = Polynomial::constant(2, Rational::new(-1, 2));
        assert_eq!(half.render(), "-1/2");
    }

    #[test]
    fn json_terms() {
        let a = p(2, "2*x1 - x2");
        let j = a.to_json_terms();
        assert_eq!(j[0].c, "2/1");
        assert_eq!(j[0].e, vec![1, 0]);
        assert_eq!(Polynomial::from_json_terms(2, &j).unwrap(), a);
    }

    #[test]
    fn division_by_linear_form_power() {
        let a = p(2, "x1 + x2");
        let f = a.pow(3).mul(&p(2, "x1 - 3*x2"));
        let (q, r) = f.div_rem(&a.pow(2)).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, a.mul(&p(2, "x1 - 3*x2")));
        assert!(!p(2, "x1*x2").is_divisible_by(&a).unwrap());
    }

    #[test]
    fn derivative_and_determinant() {
        let f = p(2, "x1^3*x2 + 5*x2^2");
        assert_eq!(f.derivative(0), p(2, "3*x1^2*x2"));
        assert_eq!(f.derivative(1), p(2, "x1^3 + 10*x2"));
        let m = vec![
            vec![p(2, "x1"), p(2, "x2")],
            vec![p(2, "x2"), p(2, "x1")],
        ];
        assert_eq!(determinant(&m, 2), p(2, "x1^2 - x2^2"));
    }
}
