//! Checks of quantitative claims about `(A, m)` against computed
//! invariants, and a suite runner over fixture and random corpora.

mod suite;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::{is_irreducible, product, MultiArrangement};
use crate::error::{Error, ErrorCategory, Result};
use crate::lattice::characteristic_polynomial;
use crate::logmod::Engine;
use crate::ratpoly::{binomial, LaurentPolynomial, Rational};
use crate::stpoly::{
    chi_free, leading_t_coefficients_check, psi_free, reduced_st, sample_generic_eta, st_bipoly,
};

pub use suite::{
    file_corpus, paper_corpus, random_corpus, run_suite, Corpus, CorpusItem, ProductPair, Reference,
    SuiteOptions, SuiteReport, Tally,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    BeyondTheorem,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N/A",
            Verdict::BeyondTheorem => "BEYOND",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subject {
    pub id: String,
    pub ell: usize,
    pub hyperplanes: usize,
    pub total_multiplicity: u64,
    pub multiplicity: Vec<u32>,
    pub params: BTreeMap<String, Value>,
}

impl Subject {
    pub fn new(id: &str, ma: &MultiArrangement) -> Self {
        Subject {
            id: id.to_string(),
            ell: ma.ell(),
            hyperplanes: ma.arrangement.len(),
            total_multiplicity: ma.total(),
            multiplicity: ma.multiplicity.0.clone(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: Subject,
    pub claimed: String,
    pub computed: String,
    pub verdict: Verdict,
    /// Set when the failure is an audit violation rather than a mismatch.
    pub hard: bool,
    pub witnesses: BTreeMap<String, Value>,
}

impl CheckReport {
    pub(crate) fn new(check: &str, subject: Subject, claimed: String, computed: String, verdict: Verdict) -> Self {
        CheckReport {
            check: check.to_string(),
            subject,
            claimed,
            computed,
            verdict,
            hard: false,
            witnesses: BTreeMap::new(),
        }
    }

    pub(crate) fn witness(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.witnesses.insert(key.to_string(), value.into());
        self
    }

    /// Report for a computation that raised an error.
    pub fn from_error(check: &str, subject: Subject, err: &Error) -> Self {
        let verdict = match err {
            Error::Precondition(_) | Error::GenericityNotFound { .. } => Verdict::NotApplicable,
            _ => Verdict::Fail,
        };
        let hard = matches!(err.category(), ErrorCategory::Check | ErrorCategory::Internal)
            && verdict == Verdict::Fail;
        CheckReport {
            check: check.to_string(),
            subject,
            claimed: "computation succeeds".into(),
            computed: err.to_string(),
            verdict,
            hard,
            witnesses: BTreeMap::from([("error_category".to_string(), json!(err.category_name()))]),
        }
    }

    pub fn text_line(&self) -> String {
        let params: Vec<String> = self.subject.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let subj = if params.is_empty() {
            self.subject.id.clone()
        } else {
            format!("{}[{}]", self.subject.id, params.join(","))
        };
        format!(
            "{:<6} {:<28} {:<22} claimed: {} | computed: {}",
            self.verdict.label(),
            self.check,
            subj,
            self.claimed,
            self.computed
        )
    }
}

fn run_guarded(check: &str, subject: Subject, f: impl FnOnce(Subject) -> Result<CheckReport>) -> CheckReport {
    match f(subject.clone()) {
        Ok(r) => r,
        Err(e) => CheckReport::from_error(check, subject, &e),
    }
}

fn poly_x(p: &LaurentPolynomial) -> String {
    p.render_with("x")
}

fn poly_t(p: &LaurentPolynomial) -> String {
    p.render_with("t")
}

fn diff_witness(claimed: &LaurentPolynomial, computed: &LaurentPolynomial, var: &str) -> Value {
    json!(computed.sub(claimed).render_with(var))
}

/// Whether `(A, m)` satisfies the hypotheses of the theorems being checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub essential: bool,
    pub simple: bool,
    pub irreducible: bool,
    pub tame: Option<bool>,
    pub pd_omega: Vec<usize>,
}

pub fn hypotheses(engine: &Engine, ma: &MultiArrangement) -> Result<Hypotheses> {
    let essential = ma.is_essential();
    let (tame, pd_omega) = if essential {
        let t = engine.tameness(ma)?;
        (Some(t.tame), t.pd_omega)
    } else {
        (None, Vec::new())
    };
    Ok(Hypotheses {
        essential,
        simple: ma.multiplicity.is_simple(),
        irreducible: is_irreducible(&ma.arrangement),
        tame,
        pd_omega,
    })
}

/// Lattice `chi` against `(-1)^l Psi(1, t)`.
pub fn check_chi_specialization(engine: &Engine, id: &str, ma: &MultiArrangement) -> CheckReport {
    const NAME: &str = "chi_specialization";
    run_guarded(NAME, Subject::new(id, ma), |subject| {
        if !ma.multiplicity.is_simple() || !ma.is_essential() {
            return Ok(CheckReport::new(
                NAME,
                subject,
                "simple essential input".into(),
                "hypothesis not met".into(),
                Verdict::NotApplicable,
            ));
        }
        let lattice = characteristic_polynomial(&ma.arrangement);
        let st = st_bipoly(engine, ma)?;
        let chi = st.chi();
        let ok = chi == lattice;
        let mut r = CheckReport::new(
            NAME,
            subject,
            poly_t(&lattice),
            poly_t(&chi),
            if ok { Verdict::Pass } else { Verdict::Fail },
        );
        if !ok {
            r = r.witness("difference", diff_witness(&lattice, &chi, "t"));
        }
        Ok(r)
    })
}

/// `ST_{d+1}` is monic of degree `|m| + l(d - 1)`.
pub fn check_monic_degree(engine: &Engine, id: &str, ma: &MultiArrangement, d: u32) -> CheckReport {
    const NAME: &str = "monic_degree";
    run_guarded(NAME, Subject::new(id, ma).with("d", d), |subject| {
        let h = hypotheses(engine, ma)?;
        if !h.essential {
            return Err(Error::Precondition("arrangement is not essential".into()));
        }
        let st = st_bipoly(engine, ma)?.st_order(d);
        let expected = ma.total() as i64 + ma.ell() as i64 * (d as i64 - 1);
        let deg = st.degree().finite().unwrap_or(-1);
        let lead = st.leading_coeff();
        let ok = deg == expected && lead.is_one();
        let verdict = match (ok, h.tame) {
            (_, Some(false)) => Verdict::BeyondTheorem,
            (true, _) => Verdict::Pass,
            (false, _) => Verdict::Fail,
        };
        let mut r = CheckReport::new(
            NAME,
            subject,
            format!("monic, degree {expected}"),
            format!("leading {}*x^{deg}", lead.to_string()),
            verdict,
        )
        .witness("st", poly_x(&st))
        .witness("tame", h.tame);
        if verdict == Verdict::BeyondTheorem {
            r = r.witness("monic_degree_holds", ok);
        }
        Ok(r)
    })
}

/// Coefficient of `x^{|m|-1}` in `ST` against `l + beta_{1,|m|}(D^{l-1})`.
pub fn check_second_coefficient(engine: &Engine, id: &str, ma: &MultiArrangement) -> CheckReport {
    const NAME: &str = "second_coefficient";
    run_guarded(NAME, Subject::new(id, ma), |subject| {
        let h = hypotheses(engine, ma)?;
        if !h.essential {
            return Err(Error::Precondition("arrangement is not essential".into()));
        }
        let ell = ma.ell();
        let n = ma.total() as i64;
        let st = st_bipoly(engine, ma)?;
        let coeff = st.st().coeff(n - 1);
        let a = if ell == 0 {
            0
        } else {
            engine.derivation_module(ma, ell - 1)?.betti.get(1, n)
        };
        let claimed = Rational::from_int(ell as i64 + a as i64);
        let ok = coeff == claimed;
        let applicable = h.tame == Some(true) && h.irreducible;
        let verdict = match (applicable, ok) {
            (false, _) => Verdict::NotApplicable,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
        let mut r = CheckReport::new(
            NAME,
            subject,
            format!("{} = {} + {}", claimed.to_string(), ell, a),
            coeff.to_string(),
            verdict,
        )
        .witness("relations_at_total_degree", a)
        .witness("relation_count_from_numerator", st.relation_count().to_string())
        .witness("tame", h.tame)
        .witness("irreducible", h.irreducible);
        if ell >= 1 {
            let betti = engine.derivation_module(ma, ell - 1)?.betti.to_json();
            r = r.witness("betti_d_l_minus_1", betti);
        }
        if !applicable && coeff < Rational::from_int(ell as i64) {
            r = r.witness("below_ell", true);
        }
        Ok(r)
    })
}

/// `reg D^p <= |m| - l + p` and `reg Omega^p <= -p` for all `p`.
pub fn check_regularity_bounds(engine: &Engine, id: &str, ma: &MultiArrangement) -> CheckReport {
    const NAME: &str = "regularity_bounds";
    run_guarded(NAME, Subject::new(id, ma), |subject| {
        if !ma.is_essential() {
            return Err(Error::Precondition("arrangement is not essential".into()));
        }
        let ell = ma.ell();
        let n = ma.total() as i64;
        let mut rows = Vec::new();
        let mut bad = Vec::new();
        for p in 0..=ell {
            let d = engine.derivation_module(ma, p)?;
            let o = engine.omega_module(ma, p)?;
            let (bd, bo) = (n - ell as i64 + p as i64, -(p as i64));
            if d.reg > bd {
                bad.push(json!({"module": format!("D^{p}"), "reg": d.reg, "bound": bd, "betti": d.betti.to_json()}));
            }
            if o.reg > bo {
                bad.push(json!({"module": format!("Omega^{p}"), "reg": o.reg, "bound": bo, "betti": o.betti.to_json()}));
            }
            rows.push(json!({"p": p, "reg_d": d.reg, "bound_d": bd, "reg_omega": o.reg, "bound_omega": bo}));
        }
        let ok = bad.is_empty();
        let mut r = CheckReport::new(
            NAME,
            subject,
            format!("{} bounds hold", 2 * (ell + 1)),
            format!("{} violations", bad.len()),
            if ok { Verdict::Pass } else { Verdict::Fail },
        )
        .witness("regularities", rows);
        if !ok {
            r.hard = true;
            r = r.witness("violations", bad);
        }
        Ok(r)
    })
}

/// For free `(A, m)`: `Psi`, `ST` and `chi` against the product formulas
/// in the exponents, and the Saito certificate.
pub fn check_free_formulas(engine: &Engine, id: &str, ma: &MultiArrangement) -> CheckReport {
    const NAME: &str = "free_formulas";
    run_guarded(NAME, Subject::new(id, ma), |subject| {
        if !ma.is_essential() {
            return Err(Error::Precondition("arrangement is not essential".into()));
        }
        let f = engine.freeness(ma)?;
        if !f.free {
            return Ok(CheckReport::new(
                NAME,
                subject,
                "free input".into(),
                format!("pd D = {}", f.pd),
                Verdict::NotApplicable,
            ));
        }
        let st = st_bipoly(engine, ma)?;
        let psi = psi_free(&f.degrees);
        let st_formula = psi.substitute_t(&LaurentPolynomial::from_coeffs(&[-1]));
        let chi = chi_free(&f.degrees);
        let mut mismatches = Vec::new();
        if st.psi != psi {
            mismatches.push(json!({"psi_formula": psi.render(), "psi": st.psi.render()}));
        }
        if st.st() != st_formula {
            mismatches.push(json!({"st_formula": poly_x(&st_formula), "st": poly_x(&st.st())}));
        }
        if st.chi() != chi {
            mismatches.push(json!({"chi_formula": poly_t(&chi), "chi": poly_t(&st.chi())}));
        }
        if ma.multiplicity.is_simple() {
            let lattice = characteristic_polynomial(&ma.arrangement);
            if lattice != chi {
                mismatches.push(json!({"chi_formula": poly_t(&chi), "lattice_chi": poly_t(&lattice)}));
            }
        }
        let ok = mismatches.is_empty();
        let mut r = CheckReport::new(
            NAME,
            subject,
            format!("product formulas for exponents {:?}", f.degrees),
            if ok { "all match".into() } else { format!("{} mismatches", mismatches.len()) },
            if ok { Verdict::Pass } else { Verdict::Fail },
        )
        .witness("exponents", f.degrees.clone())
        .witness(
            "saito_constant",
            f.saito_constant.as_ref().map(Rational::to_string),
        );
        if !ok {
            r = r.witness("mismatches", mismatches);
        }
        Ok(r)
    })
}

/// Low coefficients of `ST_{d+1}`: `dim S_i` for `i <= d`, then
/// `dim S_{d+1} - dim D(A, m)_1`.
pub fn check_low_degree_coefficients(engine: &Engine, id: &str, ma: &MultiArrangement, d: u32) -> CheckReport {
    const NAME: &str = "low_degree_coefficients";
    run_guarded(NAME, Subject::new(id, ma).with("d", d), |subject| {
        let h = hypotheses(engine, ma)?;
        if !h.essential {
            return Err(Error::Precondition("arrangement is not essential".into()));
        }
        let ell = ma.ell() as u64;
        let st = st_bipoly(engine, ma)?.st_order(d);
        let d1 = engine.derivation_module(ma, 1)?;
        let linear = d1.degrees().iter().filter(|&&k| k == 1).count() as i64;
        let dim_s = |i: u64| {
            if ell == 0 {
                Rational::from_int(i64::from(i == 0))
            } else {
                Rational::from_bigint(binomial(ell + i - 1, i))
            }
        };
        let mut claimed: Vec<Rational> = (0..=d as u64).map(dim_s).collect();
        claimed.push(&dim_s(d as u64 + 1) - &Rational::from_int(linear));
        let computed: Vec<Rational> = st.coeff_range(0, d as i64 + 1);
        let ok = computed == claimed;
        let applicable = h.tame == Some(true) && h.irreducible;
        let verdict = match (applicable, ok) {
            (false, _) => Verdict::NotApplicable,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
        let statement_form =
            &dim_s(d as u64 + 1) - &Rational::from_int(i64::from(!ma.multiplicity.is_simple()));
        let text = |v: &[Rational]| {
            let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
            format!("[{}]", parts.join(", "))
        };
        Ok(CheckReport::new(
            NAME,
            subject,
            text(&claimed),
            text(&computed),
            verdict,
        )
        .witness("dim_d1_degree_1", linear)
        .witness("statement_form_top", statement_form.to_string())
        .witness("statement_form_agrees", computed.last() == Some(&statement_form)))
    })
}

/// Hilbert function of `S / a(A, m, eta)` for a sampled generic `eta` of
/// degree `d + 1` against the coefficients of `ST_{d+1}`.
pub fn check_st_algebra_equality(
    engine: &Engine,
    id: &str,
    ma: &MultiArrangement,
    d: u32,
    seed: u64,
    max_attempts: u32,
) -> CheckReport {
    const NAME: &str = "st_algebra_equality";
    run_guarded(NAME, Subject::new(id, ma).with("d", d).with("seed", seed), |subject| {
        let h = hypotheses(engine, ma)?;
        if !h.essential {
            return Err(Error::Precondition("arrangement is not essential".into()));
        }
        let st = st_bipoly(engine, ma)?.st_order(d);
        let d1 = engine.derivation_module(ma, 1)?;
        let ideal = sample_generic_eta(&d1.generators, ma.ell(), d, seed, max_attempts, &engine.config)?;
        let coeffs = st.integer_coeffs().unwrap_or_default();
        let hf: Vec<i64> = ideal.hilbert_function.iter().map(|&v| v as i64).collect();
        let equal = coeffs == hf;
        let verdict = match (h.tame, equal) {
            (Some(false), _) => Verdict::BeyondTheorem,
            (_, true) => Verdict::Pass,
            (_, false) => Verdict::Fail,
        };
        Ok(CheckReport::new(NAME, subject, format!("{coeffs:?}"), format!("{hf:?}"), verdict)
            .witness("equal", equal)
            .witness("eta", ideal.eta.render())
            .witness("eta_attempts", ideal.attempts)
            .witness("colength", ideal.colength)
            .witness("tame", h.tame))
    })
}

/// `Hilb D^p(A1 x A2) = sum_{i+j=p} Hilb D^i(A1) Hilb D^j(A2)`.
pub fn check_product_rule(
    engine: &Engine,
    id: &str,
    first: &MultiArrangement,
    second: &MultiArrangement,
) -> CheckReport {
    const NAME: &str = "product_rule";
    let prod = product(first, second);
    run_guarded(NAME, Subject::new(id, &prod), |subject| {
        let (l1, l2) = (first.ell(), second.ell());
        let ell = (l1 + l2) as u32;
        let h1 = (0..=l1)
            .map(|p| engine.derivation_module(first, p).map(|m| m.hilbert.clone()))
            .collect::<Result<Vec<_>>>()?;
        let h2 = (0..=l2)
            .map(|p| engine.derivation_module(second, p).map(|m| m.hilbert.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut bad = Vec::new();
        for p in 0..=l1 + l2 {
            let lhs = engine.derivation_module(&prod, p)?.hilbert.numerator_over(ell);
            let mut rhs = LaurentPolynomial::zero();
            for i in p.saturating_sub(l2)..=p.min(l1) {
                rhs = rhs.add(&h1[i].mul(&h2[p - i]).numerator_over(ell));
            }
            if lhs != rhs {
                bad.push(json!({"p": p, "product": poly_x(&lhs), "convolution": poly_x(&rhs)}));
            }
        }
        let ok = bad.is_empty();
        let mut r = CheckReport::new(
            NAME,
            subject,
            format!("convolution identity for p = 0..{}", l1 + l2),
            format!("{} mismatches", bad.len()),
            if ok { Verdict::Pass } else { Verdict::Fail },
        );
        if !ok {
            r = r.witness("mismatches", bad);
        }
        Ok(r)
    })
}

/// `ST(A; -1) = 0` for simple `A`.
pub fn check_st_at_minus_one(engine: &Engine, id: &str, ma: &MultiArrangement) -> CheckReport {
    const NAME: &str = "st_at_minus_one";
    run_guarded(NAME, Subject::new(id, ma), |subject| {
        if !ma.multiplicity.is_simple() || !ma.is_essential() {
            return Err(Error::Precondition("needs a simple essential arrangement".into()));
        }
        let st = st_bipoly(engine, ma)?;
        let value = st.st().evaluate(&Rational::from_int(-1));
        let ok = value.is_zero() && ma.arrangement.len() > 0;
        let mut r = CheckReport::new(
            NAME,
            subject,
            "0".into(),
            value.to_string(),
            if ok { Verdict::Pass } else { Verdict::Fail },
        );
        if ok {
            r = r.witness("reduced_st", poly_x(&reduced_st(&st, ma)?));
        }
        Ok(r)
    })
}

/// The two highest `t`-coefficients of `Psi` against their closed forms.
pub fn check_leading_t(engine: &Engine, id: &str, ma: &MultiArrangement) -> CheckReport {
    const NAME: &str = "leading_t_coefficients";
    run_guarded(NAME, Subject::new(id, ma), |subject| {
        let st = st_bipoly(engine, ma)?;
        let c = leading_t_coefficients_check(&st)?;
        let ok = c.top_ok() && c.next_ok();
        let mut r = CheckReport::new(
            NAME,
            subject,
            format!("{} ; {}", poly_x(&c.top_expected), poly_x(&c.next_expected)),
            format!("{} ; {}", poly_x(&c.top_actual), poly_x(&c.next_actual)),
            if ok { Verdict::Pass } else { Verdict::Fail },
        )
        .witness("two_term_form_leading_agrees", c.two_term_leading_ok());
        if let Some(t) = &c.next_two_term {
            r = r.witness("two_term_form", poly_x(t));
        }
        Ok(r)
    })
}

/// Per-item check in a suite.
pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport>;
}

/// Shared state for a suite run.
pub struct Context {
    pub engine: Engine,
    pub seed: u64,
    pub orders: Vec<u32>,
    pub eta_attempts: u32,
}

struct ChiSpecialization;
struct MonicDegree;
struct SecondCoefficient;
struct RegularityBounds;
struct FreeFormulas;
struct LowDegree;
struct StAlgebra;
struct StMinusOne;
struct LeadingT;
struct ReferenceValues;

impl Check for ChiSpecialization {
    fn name(&self) -> &'static str {
        "chi_specialization"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        vec![check_chi_specialization(&ctx.engine, &item.id, &item.ma)]
    }
}

impl Check for MonicDegree {
    fn name(&self) -> &'static str {
        "monic_degree"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        ctx.orders
            .iter()
            .map(|&d| check_monic_degree(&ctx.engine, &item.id, &item.ma, d))
            .collect()
    }
}

impl Check for SecondCoefficient {
    fn name(&self) -> &'static str {
        "second_coefficient"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        vec![check_second_coefficient(&ctx.engine, &item.id, &item.ma)]
    }
}

impl Check for RegularityBounds {
    fn name(&self) -> &'static str {
        "regularity_bounds"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        vec![check_regularity_bounds(&ctx.engine, &item.id, &item.ma)]
    }
}

impl Check for FreeFormulas {
    fn name(&self) -> &'static str {
        "free_formulas"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        vec![check_free_formulas(&ctx.engine, &item.id, &item.ma)]
    }
}

impl Check for LowDegree {
    fn name(&self) -> &'static str {
        "low_degree_coefficients"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        ctx.orders
            .iter()
            .map(|&d| check_low_degree_coefficients(&ctx.engine, &item.id, &item.ma, d))
            .collect()
    }
}

impl Check for StAlgebra {
    fn name(&self) -> &'static str {
        "st_algebra_equality"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        item.algebra_orders
            .iter()
            .map(|&d| check_st_algebra_equality(&ctx.engine, &item.id, &item.ma, d, ctx.seed, ctx.eta_attempts))
            .collect()
    }
}

impl Check for StMinusOne {
    fn name(&self) -> &'static str {
        "st_at_minus_one"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        vec![check_st_at_minus_one(&ctx.engine, &item.id, &item.ma)]
    }
}

impl Check for LeadingT {
    fn name(&self) -> &'static str {
        "leading_t_coefficients"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        vec![check_leading_t(&ctx.engine, &item.id, &item.ma)]
    }
}

impl Check for ReferenceValues {
    fn name(&self) -> &'static str {
        "reference_values"
    }
    fn run(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        suite::check_reference(&ctx.engine, item)
    }
}

/// Named checks, run in registration order.
pub struct Registry {
    checks: Vec<Box<dyn Check>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { checks: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(ReferenceValues));
        r.register(Box::new(ChiSpecialization));
        r.register(Box::new(RegularityBounds));
        r.register(Box::new(MonicDegree));
        r.register(Box::new(SecondCoefficient));
        r.register(Box::new(LowDegree));
        r.register(Box::new(FreeFormulas));
        r.register(Box::new(StMinusOne));
        r.register(Box::new(LeadingT));
        r.register(Box::new(StAlgebra));
        r
    }

    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    /// Keeps only the named checks; unknown names are an input error.
    pub fn select(self, names: &[String]) -> Result<Self> {
        for n in names {
            if self.get(n).is_none() {
                return Err(Error::Input(format!("unknown check {n}")));
            }
        }
        Ok(Registry {
            checks: self
                .checks
                .into_iter()
                .filter(|c| names.iter().any(|n| n == c.name()))
                .collect(),
        })
    }

    pub fn run_item(&self, ctx: &Context, item: &CorpusItem) -> Vec<CheckReport> {
        self.checks.iter().flat_map(|c| c.run(ctx, item)).collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::standard()
    }
}
