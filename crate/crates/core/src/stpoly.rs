//! The bi-polynomial `Psi(A, m; x, t)`, its specializations, and the
//! algebra `S / a(A, m, eta)` with the complex it comes from.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::arrangement::MultiArrangement;
use crate::error::{Error, Result};
use crate::groebner::{
    groebner_basis, kernel_of_map, quotient_colength, Colength, FreeModule, GbConfig, Lifter,
    ModuleElement,
};
use crate::logmod::{subsets, Engine};
use crate::ratpoly::{BiPolynomial, LaurentPolynomial, Monomial, Polynomial, Rational, RationalSeries};

/// `Psi` together with the numerators `f_p` of `Hilb(D^p) = f_p / (1-x)^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StBiPoly {
    pub ell: usize,
    /// `|m|`.
    pub total: u64,
    pub psi: BiPolynomial,
    pub numerators: Vec<LaurentPolynomial>,
    /// Coefficient of `x^{|m|}` in `f_p`.
    pub a: Vec<Rational>,
    /// Coefficient of `x^{|m|-1}` in `f_p`.
    pub b: Vec<Rational>,
}

/// `(t(x-1) - 1)^p` as a bi-polynomial.
fn kernel_factor_pow(p: usize) -> BiPolynomial {
    let base = BiPolynomial::from_terms([
        ((1, 1), Rational::one()),
        ((0, 1), Rational::from_int(-1)),
        ((0, 0), Rational::from_int(-1)),
    ]);
    let mut acc = BiPolynomial::from_terms([((0, 0), Rational::one())]);
    for _ in 0..p {
        acc = acc.mul(&base);
    }
    acc
}

impl StBiPoly {
    /// Assembles `sum_p f_p (t(x-1)-1)^p` and divides each `t`-coefficient
    /// exactly by `(1-x)^l`.
    pub fn from_series(ell: usize, total: u64, series: &[RationalSeries]) -> Result<Self> {
        if series.len() != ell + 1 {
            return Err(Error::Structural(format!(
                "expected {} Hilbert series, got {}",
                ell + 1,
                series.len()
            )));
        }
        let numerators: Vec<LaurentPolynomial> =
            series.iter().map(|s| s.numerator_over(ell as u32)).collect();
        let mut sum = BiPolynomial::zero();
        for (p, f) in numerators.iter().enumerate() {
            let fp = BiPolynomial::from_t_coefficients(std::slice::from_ref(f));
            sum = sum.add(&fp.mul(&kernel_factor_pow(p)));
        }
        let denom = LaurentPolynomial::one_minus_x_pow(ell as u32);
        let mut coeffs = Vec::new();
        for k in 0..=ell as u32 {
            coeffs.push(sum.t_coefficient(k).exact_divide(&denom)?);
        }
        let n = total as i64;
        Ok(StBiPoly {
            ell,
            total,
            psi: BiPolynomial::from_t_coefficients(&coeffs),
            a: numerators.iter().map(|f| f.coeff(n)).collect(),
            b: numerators.iter().map(|f| f.coeff(n - 1)).collect(),
            numerators,
        })
    }

    /// `ST(x) = Psi(x, -1)`.
    pub fn st(&self) -> LaurentPolynomial {
        self.st_order(1)
    }

    /// Order `d + 1`: substitute `t = -(1 + x + ... + x^{d-1})`.
    pub fn st_order(&self, d: u32) -> LaurentPolynomial {
        assert!(d >= 1, "order must be at least 2");
        self.psi.substitute_t(&LaurentPolynomial::geometric(d).neg())
    }

    /// `chi(A, m; t) = (-1)^l Psi(1, t)`, returned with variable `t`.
    pub fn chi(&self) -> LaurentPolynomial {
        let v = self.psi.at_x_equals_one();
        if self.ell % 2 == 0 {
            v
        } else {
            v.neg()
        }
    }

    /// `a := beta_{1,|m|}(D^{l-1})`-style count read off `f_{l-1}`: the
    /// negated coefficient of `x^{|m|}`.
    pub fn relation_count(&self) -> Rational {
        if self.ell == 0 {
            return Rational::zero();
        }
        -self.a[self.ell - 1].clone()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f: Vec<_> = self
            .numerators
            .iter()
            .enumerate()
            .map(|(p, f)| json!({"p": p, "numerator": f.to_json_terms()}))
            .collect();
        json!({
            "ell": self.ell,
            "total_multiplicity": self.total,
            "denominator_power": self.ell,
            "f": f,
            "a": self.a.iter().map(Rational::to_fraction_string).collect::<Vec<_>>(),
            "b": self.b.iter().map(Rational::to_fraction_string).collect::<Vec<_>>(),
            "psi": self.psi.to_json_terms(),
            "psi_text": self.psi.render(),
        })
    }
}

/// `Psi` of `(A, m)` from the Hilbert series of all `D^p`.
pub fn st_bipoly(engine: &Engine, ma: &MultiArrangement) -> Result<StBiPoly> {
    if !ma.is_essential() {
        return Err(Error::Precondition("arrangement is not essential".into()));
    }
    let series = (0..=ma.ell())
        .map(|p| engine.derivation_module(ma, p).map(|m| m.hilbert.clone()))
        .collect::<Result<Vec<_>>>()?;
    StBiPoly::from_series(ma.ell(), ma.total(), &series).map_err(|e| match e {
        Error::NonDivisible { remainder } => Error::Internal(format!(
            "Psi is not a polynomial (remainder {remainder})"
        )),
        other => other,
    })
}

/// `prod_i (1 + x + ... + x^{d_i - 1} - t x^{d_i})`.
pub fn psi_free(degrees: &[i64]) -> BiPolynomial {
    let mut acc = BiPolynomial::from_terms([((0, 0), Rational::one())]);
    for &d in degrees {
        let mut f = BiPolynomial::from_t_coefficients(&[LaurentPolynomial::geometric(d as u32)]);
        f.add_term(d, 1, &Rational::from_int(-1));
        acc = acc.mul(&f);
    }
    acc
}

/// `prod_i (t - d_i)`.
pub fn chi_free(degrees: &[i64]) -> LaurentPolynomial {
    degrees.iter().fold(LaurentPolynomial::one(), |acc, &d| {
        acc.mul(&LaurentPolynomial::from_terms([
            (1, Rational::one()),
            (0, Rational::from_int(-d)),
        ]))
    })
}

/// `ST / (1 + x)` for a simple arrangement.
pub fn reduced_st(st: &StBiPoly, ma: &MultiArrangement) -> Result<LaurentPolynomial> {
    if !ma.multiplicity.is_simple() {
        return Err(Error::Precondition("reduced ST polynomial needs m = 1".into()));
    }
    st.st()
        .exact_divide(&LaurentPolynomial::from_coeffs(&[1, 1]))
        .map_err(|e| Error::Check(format!("ST(-1) != 0: {e}")))
}

/// Comparison of the two highest `t`-coefficients of `Psi` with their
/// closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTCheck {
    pub top_expected: LaurentPolynomial,
    pub top_actual: LaurentPolynomial,
    /// `(-1)^{l-1} (l x^n - f_{l-1}) / (x - 1)`.
    pub next_expected: LaurentPolynomial,
    /// `(-1)^{l-1} ((l - a) x^n - b x^{n-1}) / (x - 1)`, when exact.
    pub next_two_term: Option<LaurentPolynomial>,
    pub next_actual: LaurentPolynomial,
}

impl LeadingTCheck {
    pub fn top_ok(&self) -> bool {
        self.top_expected == self.top_actual
    }

    pub fn next_ok(&self) -> bool {
        self.next_expected == self.next_actual
    }

    /// The two-term form agrees in the two highest `x`-degrees.
    pub fn two_term_leading_ok(&self) -> bool {
        let Some(t) = &self.next_two_term else {
            return false;
        };
        let n = t.degree().finite().unwrap_or(0).max(self.next_actual.degree().finite().unwrap_or(0));
        (n - 1..=n).all(|e| t.coeff(e) == self.next_actual.coeff(e))
    }
}

pub fn leading_t_coefficients_check(st: &StBiPoly) -> Result<LeadingTCheck> {
    let ell = st.ell;
    let n = st.total as i64;
    let sign = |k: usize, p: LaurentPolynomial| if k % 2 == 0 { p } else { p.neg() };
    let top_expected = sign(ell, LaurentPolynomial::x_pow(n));
    let top_actual = st.psi.t_coefficient(ell as u32);
    if ell == 0 {
        return Ok(LeadingTCheck {
            top_expected,
            top_actual,
            next_expected: LaurentPolynomial::zero(),
            next_two_term: None,
            next_actual: LaurentPolynomial::zero(),
        });
    }
    let x_minus_1 = LaurentPolynomial::from_coeffs(&[-1, 1]);
    let l = Rational::from_int(ell as i64);
    let f = &st.numerators[ell - 1];
    let exact = LaurentPolynomial::monomial(n, l.clone())
        .sub(f)
        .exact_divide(&x_minus_1)?;
    let mut two = LaurentPolynomial::monomial(n, &l - &st.a[ell - 1]);
    two.add_term(n - 1, &-st.b[ell - 1].clone());
    let two = two.exact_divide(&x_minus_1).ok().map(|p| sign(ell - 1, p));
    Ok(LeadingTCheck {
        top_expected,
        top_actual,
        next_expected: sign(ell - 1, exact),
        next_two_term: two,
        next_actual: st.psi.t_coefficient(ell as u32 - 1),
    })
}

/// `theta(eta) = sum_j f_j ∂eta/∂x_j` for `theta` in `D^1`.
pub fn apply_derivation(theta: &ModuleElement, eta: &Polynomial) -> Polynomial {
    theta
        .components
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_zero())
        .fold(Polynomial::zero(eta.nvars()), |acc, (j, f)| acc.add(&f.mul(&eta.derivative(j))))
}

/// Result of building `a(A, m, eta)` and its quotient.
#[derive(Clone, Debug)]
pub struct StIdeal {
    pub eta: Polynomial,
    pub ideal_gens: Vec<Polynomial>,
    pub hilbert_function: Vec<u64>,
    pub colength: Option<u64>,
    pub generic_certified: bool,
    pub attempts: u32,
}

impl StIdeal {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "eta": self.eta.to_json_terms(),
            "eta_text": self.eta.render(),
            "ideal": self.ideal_gens.iter().map(Polynomial::to_json_terms).collect::<Vec<_>>(),
            "hilbert_function": self.hilbert_function,
            "colength": self.colength,
            "generic_certified": self.generic_certified,
            "attempts": self.attempts,
        })
    }
}

/// Hilbert function of `S / (theta_i(eta))` over the generators of `D(A, m)`.
pub fn st_algebra_hilbert(
    d1_gens: &[ModuleElement],
    eta: &Polynomial,
    config: &GbConfig,
) -> Result<(Vec<Polynomial>, Colength)> {
    let gens: Vec<Polynomial> = d1_gens.iter().map(|t| apply_derivation(t, eta)).collect();
    let c = quotient_colength(&gens, eta.nvars(), config)?;
    Ok((gens, c))
}

/// Monomials of degree `k` in `n` variables, lexicographically decreasing.
fn monomials_of_degree(n: usize, k: u32) -> Vec<Monomial> {
    fn rec(n: usize, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == n - 1 {
            cur.push(k);
            out.push(Monomial::from_exponents(cur));
            cur.pop();
            return;
        }
        for e in (0..=k).rev() {
            cur.push(e);
            rec(n, k - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `sum_i x_i^{d+1}`.
pub fn fallback_eta(ell: usize, d: u32) -> Polynomial {
    (0..ell).fold(Polynomial::zero(ell), |acc, i| {
        acc.add(&Polynomial::variable(ell, i).pow(d + 1))
    })
}

/// Random form of degree `d+1` with integer coefficients in `[-bound, bound]`.
pub fn random_eta<R: Rng>(ell: usize, d: u32, bound: i64, rng: &mut R) -> Polynomial {
    let terms = monomials_of_degree(ell, d + 1)
        .into_iter()
        .map(|m| (m, Rational::from_int(rng.gen_range(-bound..=bound))))
        .collect::<Vec<_>>();
    Polynomial::from_terms(ell, terms)
}

/// Draws `eta` of degree `d+1` until `S / a(A, m, eta)` has finite length.
/// The first candidate is `sum x_i^{d+1}`; later ones are random with the
/// coefficient range doubling from 4.
pub fn sample_generic_eta(
    d1_gens: &[ModuleElement],
    ell: usize,
    d: u32,
    seed: u64,
    max_attempts: u32,
    config: &GbConfig,
) -> Result<StIdeal> {
    if d < 1 {
        return Err(Error::Input("order d must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bound = 4i64;
    for attempt in 1..=max_attempts {
        let eta = if attempt == 1 {
            fallback_eta(ell, d)
        } else {
            let e = random_eta(ell, d, bound, &mut rng);
            bound = bound.saturating_mul(2);
            e
        };
        if eta.is_zero() {
            continue;
        }
        let (ideal_gens, c) = st_algebra_hilbert(d1_gens, &eta, config)?;
        if let Colength::Finite {
            colength,
            hilbert_function,
        } = c
        {
            return Ok(StIdeal {
                eta,
                ideal_gens,
                hilbert_function,
                colength: Some(colength),
                generic_certified: true,
                attempts: attempt,
            });
        }
    }
    Err(Error::GenericityNotFound {
        attempts: max_attempts,
    })
}

/// `S / a` for a user-supplied `eta`, without a genericity claim beyond
/// finite length.
pub fn st_ideal_for_eta(d1_gens: &[ModuleElement], eta: &Polynomial, config: &GbConfig) -> Result<StIdeal> {
    if !eta.is_homogeneous() || eta.is_zero() {
        return Err(Error::Input("eta must be a nonzero homogeneous form".into()));
    }
    let (ideal_gens, c) = st_algebra_hilbert(d1_gens, eta, config)?;
    let (hilbert_function, colength) = match c {
        Colength::Finite {
            colength,
            hilbert_function,
        } => (hilbert_function, Some(colength)),
        Colength::Infinite => (Vec::new(), None),
    };
    Ok(StIdeal {
        eta: eta.clone(),
        ideal_gens,
        generic_certified: colength.is_some(),
        hilbert_function,
        colength,
        attempts: 1,
    })
}

/// Contraction with `d eta`: `∂_I -> sum_k (-1)^{k-1} eta_{i_k} ∂_{I - i_k}`.
pub fn contract(theta: &ModuleElement, eta: &Polynomial, ell: usize, p: usize) -> ModuleElement {
    let lower = subsets(ell, p - 1);
    let index: std::collections::HashMap<Vec<usize>, usize> =
        lower.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let partials: Vec<Polynomial> = (0..ell).map(|i| eta.derivative(i)).collect();
    let mut out = ModuleElement::zero(ell, lower.len());
    for (f, iset) in theta.components.iter().zip(subsets(ell, p)) {
        if f.is_zero() {
            continue;
        }
        for (k, &i) in iset.iter().enumerate() {
            let mut rest = iset.clone();
            rest.remove(k);
            let term = f.mul(&partials[i]);
            let slot = &mut out.components[index[&rest]];
            *slot = if k % 2 == 0 { slot.add(&term) } else { slot.sub(&term) };
        }
    }
    out
}

/// The complex `0 -> D^l -> ... -> D^1 -> D^0 -> 0` with differential
/// contraction by `d eta`, in generator coordinates.
#[derive(Clone, Debug)]
pub struct StComplex {
    pub ell: usize,
    pub eta: Polynomial,
    /// `generators[p]`: generators of `D^p` in the basis `∂_I`.
    pub generators: Vec<Vec<ModuleElement>>,
    /// `matrices[p]` for `p >= 1`: column `j` holds the coordinates of
    /// `∂(g_j)` on the generators of `D^{p-1}`. `matrices[0]` is empty.
    pub matrices: Vec<Vec<Vec<Polynomial>>>,
}

pub fn st_complex(engine: &Engine, ma: &MultiArrangement, eta: &Polynomial) -> Result<StComplex> {
    let ell = ma.ell();
    let generators = (0..=ell)
        .map(|p| engine.derivation_module(ma, p).map(|m| m.generators.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut matrices = vec![Vec::new()];
    for p in 1..=ell {
        let target = FreeModule::free(ell, subsets(ell, p - 1).len());
        let lifter = Lifter::new(&generators[p - 1], &target, &engine.config)?;
        let mut cols = Vec::new();
        for g in &generators[p] {
            let img = contract(g, eta, ell, p);
            let c = lifter.lift(&img).ok_or_else(|| {
                Error::Internal(format!("contraction of a generator of D^{p} leaves D^{}", p - 1))
            })?;
            cols.push(c);
        }
        matrices.push(cols);
    }
    let cx = StComplex {
        ell,
        eta: eta.clone(),
        generators,
        matrices,
    };
    cx.audit()?;
    Ok(cx)
}

impl StComplex {
    /// `∂ ∘ ∂ = 0`, checked on the ambient coordinates.
    pub fn audit(&self) -> Result<()> {
        for p in 2..=self.ell {
            for g in &self.generators[p] {
                let once = contract(g, &self.eta, self.ell, p);
                let twice = contract(&once, &self.eta, self.ell, p - 1);
                if !twice.is_zero() {
                    return Err(Error::Internal(format!("∂∘∂ != 0 at order {p}")));
                }
            }
        }
        for p in 1..=self.ell {
            let rank = subsets(self.ell, p - 1).len();
            for (g, col) in self.generators[p].iter().zip(&self.matrices[p]) {
                let lifted = ModuleElement::combination(col, &self.generators[p - 1], self.ell, rank);
                if lifted != contract(g, &self.eta, self.ell, p) {
                    return Err(Error::Internal(format!("lift mismatch at order {p}")));
                }
            }
        }
        Ok(())
    }

    /// Hilbert series of `H_p = ker ∂_p / im ∂_{p+1}`, both taken inside
    /// `⊕ S ∂_I` with polynomial degrees.
    pub fn homology_hilbert_series(&self, p: usize, config: &GbConfig) -> Result<RationalSeries> {
        let ell = self.ell;
        let ambient = FreeModule::free(ell, subsets(ell, p).len());
        let cycles: Vec<ModuleElement> = if p == 0 {
            vec![ModuleElement::unit(ell, 1, 0)]
        } else {
            let gens = &self.generators[p];
            let d = self.eta.degree().finite().unwrap_or(1) - 1;
            let images: Vec<ModuleElement> = gens.iter().map(|g| contract(g, &self.eta, ell, p)).collect();
            let rows = subsets(ell, p - 1).len();
            let matrix: Vec<Vec<Polynomial>> = (0..rows)
                .map(|r| images.iter().map(|c| c.components[r].clone()).collect())
                .collect();
            let source = FreeModule::new(ell, gens.iter().map(|g| g.degree(&ambient).unwrap() + d).collect());
            let target = FreeModule::free(ell, rows);
            let k = kernel_of_map(&matrix, &source, &target, config)?;
            k.generators
                .iter()
                .map(|c| ModuleElement::combination(&c.components, gens, ell, ambient.rank()))
                .collect()
        };
        let boundaries: Vec<ModuleElement> = if p == ell {
            Vec::new()
        } else {
            self.generators[p + 1]
                .iter()
                .map(|g| contract(g, &self.eta, ell, p + 1))
                .collect()
        };
        let z = groebner_basis(&cycles, &ambient, config)?.submodule_hilbert_series();
        let b = groebner_basis(&boundaries, &ambient, config)?.submodule_hilbert_series();
        Ok(z.sub(&b))
    }
}
