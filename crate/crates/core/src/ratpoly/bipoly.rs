use std::collections::BTreeMap;
use std::fmt;

use super::laurent::LaurentPolynomial;
use super::rational::Rational;

/// Polynomial in `t` whose coefficients are Laurent polynomials in `x`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPolynomial {
    /// keyed by (x-exponent, t-exponent)
    terms: BTreeMap<(i64, u32), Rational>,
}

impl BiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, u32), Rational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k.0, k.1, &c);
        }
        out
    }

    /// `sum_k coeffs[k] * t^k`.
    pub fn from_t_coefficients(coeffs: &[LaurentPolynomial]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in c.terms() {
                out.add_term(e, k as u32, a);
            }
        }
        out
    }

    pub fn add_term(&mut self, x_exp: i64, t_exp: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let key = (x_exp, t_exp);
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, u32), &Rational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn t_coefficient(&self, k: u32) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            self.terms
                .iter()
                .filter(|(key, _)| key.1 == k)
                .map(|(key, c)| (key.0, c.clone())),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((e, t), c) in &other.terms {
            out.add_term(*e, *t, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((ea, ta), ca) in &self.terms {
            for ((eb, tb), cb) in &other.terms {
                out.add_term(ea + eb, ta + tb, &(ca * cb));
            }
        }
        out
    }

    /// Ring-homomorphic substitution `t -> s(x)`.
    pub fn substitute_t(&self, s: &LaurentPolynomial) -> LaurentPolynomial {
        let Some(top) = self.t_degree() else {
            return LaurentPolynomial::zero();
        };
        // Horner in t
        let mut acc = LaurentPolynomial::zero();
        for k in (0..=top).rev() {
            acc = acc.mul(s).add(&self.t_coefficient(k));
        }
        acc
    }

    /// Specialization `x = 1`, a polynomial in `t` (returned in the
    /// Laurent type with the variable read as `t`).
    pub fn at_x_equals_one(&self) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for ((_, t), c) in &self.terms {
            out.add_term(*t as i64, c);
        }
        out
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&(i64, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        let mut out = String::new();
        for (k, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            match key.0 {
                0 => {}
                1 => parts.push("x".to_string()),
                e => parts.push(format!("x^{e}")),
            }
            match key.1 {
                0 => {}
                1 => parts.push("t".to_string()),
                e => parts.push(format!("t^{e}")),
            }
            let mono = parts.join("*");
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

    /// JSON term map: `[{"c": "num/den", "e": [x_exp, t_exp]}]`.
    pub fn to_json_terms(&self) -> Vec<serde_json::Value> {
        let mut keys: Vec<&(i64, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        keys.into_iter()
            .map(|k| serde_json::json!({"c": self.terms[k].to_fraction_string(), "e": [k.0, k.1]}))
            .collect()
    }
}

impl fmt::Display for BiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for BiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
