use std::fmt;

use super::laurent::LaurentPolynomial;
use super::rational::Rational;

/// `numerator / (1 - x)^denom_power`, kept with all common factors of
/// `(1 - x)` cancelled.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalSeries {
    numerator: LaurentPolynomial,
    denom_power: u32,
}

impl RationalSeries {
    pub fn new(numerator: LaurentPolynomial, denom_power: u32) -> Self {
        let one_minus_x = LaurentPolynomial::from_coeffs(&[1, -1]);
        let mut num = numerator;
        let mut k = denom_power;
        while k > 0 && !num.is_zero() {
            match num.exact_divide(&one_minus_x) {
                Ok(q) => {
                    num = q;
                    k -= 1;
                }
                Err(_) => break,
            }
        }
        if num.is_zero() {
            k = 0;
        }
        RationalSeries {
            numerator: num,
            denom_power: k,
        }
    }

    pub fn zero() -> Self {
        RationalSeries {
            numerator: LaurentPolynomial::zero(),
            denom_power: 0,
        }
    }

    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.numerator
    }

    pub fn denom_power(&self) -> u32 {
        self.denom_power
    }

    /// Numerator when the denominator is written as `(1 - x)^power`.
    /// Panics if `power` is below the canonical denominator power.
    pub fn numerator_over(&self, power: u32) -> LaurentPolynomial {
        assert!(
            power >= self.denom_power,
            "series needs denominator power at least {}",
            self.denom_power
        );
        self.numerator
            .mul(&LaurentPolynomial::one_minus_x_pow(power - self.denom_power))
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.denom_power.max(other.denom_power);
        RationalSeries::new(self.numerator_over(k).add(&other.numerator_over(k)), k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.denom_power.max(other.denom_power);
        RationalSeries::new(self.numerator_over(k).sub(&other.numerator_over(k)), k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalSeries::new(
            self.numerator.mul(&other.numerator),
            self.denom_power + other.denom_power,
        )
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        RationalSeries {
            numerator: self.numerator.shift(k),
            denom_power: self.denom_power,
        }
    }

    /// Power-series coefficients for exponents `lo..=hi`.
    pub fn expand(&self, lo: i64, hi: i64) -> Vec<Rational> {
        // coefficient of x^j in 1/(1-x)^k is C(j + k - 1, k - 1)
        let k = self.denom_power as u64;
        (lo..=hi)
            .map(|target| {
                let mut acc = Rational::zero();
                for (e, c) in self.numerator.terms() {
                    let j = target - e;
                    if j < 0 {
                        continue;
                    }
                    let mult = if k == 0 {
                        if j == 0 {
                            1.into()
                        } else {
                            0.into()
                        }
                    } else {
                        super::rational::binomial(j as u64 + k - 1, k - 1)
                    };
                    acc += &(c * &Rational::from_bigint(mult));
                }
                acc
            })
            .collect()
    }

    pub fn render(&self) -> String {
        match self.denom_power {
            0 => self.numerator.render_with("x"),
            1 => format!("({})/(1 - x)", self.numerator.render_with("x")),
            k => format!("({})/(1 - x)^{k}", self.numerator.render_with("x")),
        }
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
