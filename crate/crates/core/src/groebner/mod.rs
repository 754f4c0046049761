//! Gröbner bases for homogeneous submodules of graded free modules over
//! `Q[x_1..x_l]`, together with syzygies, kernels, minimal generators,
//! minimal free resolutions and Hilbert series.

mod buchberger;
mod hilbert;
mod resolution;
mod vector;

use std::fmt;

use buchberger::{Buchberger, Elem, Reducer};
pub use hilbert::{monomial_ideal_numerator, quotient_colength, Colength};
pub use resolution::{hilbert_series, minimal_free_resolution, BettiTable, Resolution};
pub use vector::{ModuleOrder, OrderKind, SVec, VTerm};

use crate::error::{Error, Result};
use crate::ratpoly::{LaurentPolynomial, Monomial, Polynomial, Rational, RationalSeries};

/// Budgets and order selection for Gröbner computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbConfig {
    pub max_pairs: usize,
    pub max_degree: i64,
    pub order: OrderKind,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_pairs: 2_000_000,
            max_degree: 256,
            order: OrderKind::DegPot,
        }
    }
}

/// `⊕_j S[-shifts[j]]`: the generator `e_j` sits in degree `shifts[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeModule {
    nvars: usize,
    shifts: Vec<i64>,
}

impl FreeModule {
    pub fn new(nvars: usize, shifts: Vec<i64>) -> Self {
        FreeModule { nvars, shifts }
    }

    /// `S^rank` with all generators in degree 0.
    pub fn free(nvars: usize, rank: usize) -> Self {
        FreeModule {
            nvars,
            shifts: vec![0; rank],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn order(&self, kind: OrderKind) -> ModuleOrder {
        ModuleOrder::new(kind, self.shifts.clone())
    }

    /// Hilbert series `sum_j x^{shift_j} / (1-x)^l`.
    pub fn hilbert_series(&self) -> RationalSeries {
        let mut num = LaurentPolynomial::zero();
        for &s in &self.shifts {
            num.add_term(s, &Rational::one());
        }
        RationalSeries::new(num, self.nvars as u32)
    }
}

/// Element of a free module in coordinates: one polynomial per generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    pub components: Vec<Polynomial>,
}

impl ModuleElement {
    pub fn new(components: Vec<Polynomial>) -> Self {
        ModuleElement { components }
    }

    pub fn zero(nvars: usize, rank: usize) -> Self {
        ModuleElement {
            components: vec![Polynomial::zero(nvars); rank],
        }
    }

    pub fn unit(nvars: usize, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(nvars, rank);
        v.components[i] = Polynomial::one(nvars);
        v
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Degree of a homogeneous element in the given module; `None` for zero
    /// or inhomogeneous elements.
    pub fn degree(&self, module: &FreeModule) -> Option<i64> {
        let mut deg = None;
        for (p, s) in self.components.iter().zip(module.shifts()) {
            for (m, _) in p.terms() {
                let d = m.degree() as i64 + s;
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, module: &FreeModule) -> bool {
        self.is_zero() || self.degree(module).is_some()
    }

    pub fn add(&self, other: &Self) -> Self {
        ModuleElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ModuleElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        ModuleElement {
            components: self.components.iter().map(|a| a.mul(f)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ModuleElement {
            components: self.components.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// `sum_i coeffs[i] * elems[i]`.
    pub fn combination(coeffs: &[Polynomial], elems: &[ModuleElement], nvars: usize, rank: usize) -> Self {
        let mut acc = ModuleElement::zero(nvars, rank);
        for (c, e) in coeffs.iter().zip(elems) {
            if !c.is_zero() {
                acc = acc.add(&e.mul_poly(c));
            }
        }
        acc
    }

    pub fn has_nonzero_constant(&self) -> bool {
        self.components
            .iter()
            .any(|p| !p.is_zero() && p.is_constant())
    }

    pub(crate) fn to_svec(&self, order: &ModuleOrder) -> SVec {
        SVec::from_components(&self.components, order)
    }

    pub(crate) fn from_svec(v: &SVec, module: &FreeModule) -> Self {
        ModuleElement {
            components: v.to_components(module.rank(), module.nvars()),
        }
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|p| p.render()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Generators of a submodule of a graded free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmodulePresentation {
    pub ambient: FreeModule,
    pub generators: Vec<ModuleElement>,
}

fn check_elements(elems: &[ModuleElement], module: &FreeModule) -> Result<()> {
    for e in elems {
        if e.rank() != module.rank() {
            return Err(Error::Structural(format!(
                "element of rank {} in a module of rank {}",
                e.rank(),
                module.rank()
            )));
        }
        if e.components.iter().any(|p| p.nvars() != module.nvars()) {
            return Err(Error::Structural("variable count mismatch".into()));
        }
        if !e.is_homogeneous(module) {
            return Err(Error::Precondition(format!(
                "inhomogeneous element {}",
                e.render()
            )));
        }
    }
    Ok(())
}

/// Gröbner basis of a submodule, kept in a fixed module order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    module: FreeModule,
    order: ModuleOrder,
    elems: Vec<Elem>,
}

impl GroebnerBasis {
    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> Vec<ModuleElement> {
        self.elems
            .iter()
            .map(|e| ModuleElement::from_svec(&e.main, &self.module))
            .collect()
    }

    /// Leading module monomials `(position, monomial)`.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems
            .iter()
            .map(|e| (e.main.terms[0].pos, e.main.terms[0].mono.clone()))
            .collect()
    }

    pub fn normal_form(&self, v: &ModuleElement) -> ModuleElement {
        let reducer = Reducer::new(&self.elems, &self.order, None);
        let (r, _) = reducer.reduce(v.to_svec(&self.order), SVec::zero());
        ModuleElement::from_svec(&r, &self.module)
    }

    pub fn contains(&self, v: &ModuleElement) -> bool {
        self.normal_form(v).is_zero()
    }

    /// Buchberger criterion audit: every S-pair reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let reducer = Reducer::new(&self.elems, &self.order, None);
        let one = Rational::one();
        for i in 0..self.elems.len() {
            for j in (i + 1)..self.elems.len() {
                let (a, b) = (&self.elems[i].main, &self.elems[j].main);
                let (la, lb) = (&a.terms[0], &b.terms[0]);
                if la.pos != lb.pos {
                    continue;
                }
                let l = la.mono.lcm(&lb.mono);
                let mut s = a.mul_term(&l.div(&la.mono), &lb.coeff);
                s.sub_mul_assign(&la.coeff, &l.div(&lb.mono), b, &self.order);
                let _ = &one;
                let (r, _) = reducer.reduce(s, SVec::zero());
                if !r.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Hilbert series of `F / M` read off the leading terms.
    pub fn quotient_hilbert_series(&self) -> RationalSeries {
        let n = self.module.nvars();
        let mut per_pos: Vec<Vec<Monomial>> = vec![Vec::new(); self.module.rank()];
        for (pos, m) in self.leading_terms() {
            per_pos[pos].push(m);
        }
        let mut num = LaurentPolynomial::zero();
        for (pos, gens) in per_pos.iter().enumerate() {
            let part = monomial_ideal_numerator(gens, n).shift(self.module.shifts()[pos]);
            num = num.add(&part);
        }
        RationalSeries::new(num, n as u32)
    }

    /// Hilbert series of the submodule `M` itself.
    pub fn submodule_hilbert_series(&self) -> RationalSeries {
        self.module
            .hilbert_series()
            .sub(&self.quotient_hilbert_series())
    }
}

fn run_untracked(
    gens: Vec<SVec>,
    module: &FreeModule,
    order: &ModuleOrder,
    config: &GbConfig,
) -> Result<buchberger::Outcome> {
    let inputs = gens.into_iter().map(|g| (g, SVec::zero())).collect();
    Buchberger::new(module.nvars(), order, None, config).run(inputs)
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn groebner_basis(
    gens: &[ModuleElement],
    module: &FreeModule,
    config: &GbConfig,
) -> Result<GroebnerBasis> {
    check_elements(gens, module)?;
    let order = module.order(config.order);
    let svecs = gens.iter().map(|g| g.to_svec(&order)).collect();
    let out = run_untracked(svecs, module, &order, config)?;
    let elems = buchberger::interreduce(out.basis, &order);
    Ok(GroebnerBasis {
        module: module.clone(),
        order,
        elems,
    })
}

/// Leading module monomials of a (not necessarily reduced) Gröbner basis.
pub(crate) fn leading_terms_unreduced(
    gens: &[ModuleElement],
    module: &FreeModule,
    config: &GbConfig,
) -> Result<Vec<(usize, Monomial)>> {
    check_elements(gens, module)?;
    let order = module.order(config.order);
    let svecs = gens.iter().map(|g| g.to_svec(&order)).collect();
    let out = run_untracked(svecs, module, &order, config)?;
    Ok(out
        .basis
        .iter()
        .map(|e| (e.main.terms[0].pos, e.main.terms[0].mono.clone()))
        .collect())
}

pub fn normal_form(v: &ModuleElement, gb: &GroebnerBasis) -> ModuleElement {
    gb.normal_form(v)
}

/// Indices of a minimal homogeneous generating subset of `gens`
/// (graded Nakayama: a generator is dropped when it lies in the span of
/// lower-degree generators and already accepted ones of its degree).
pub fn minimal_generator_indices(
    gens: &[ModuleElement],
    module: &FreeModule,
    config: &GbConfig,
) -> Result<Vec<usize>> {
    check_elements(gens, module)?;
    let order = module.order(config.order);
    let svecs = gens.iter().map(|g| g.to_svec(&order)).collect();
    Ok(run_untracked(svecs, module, &order, config)?.minimal_inputs)
}

/// Minimal homogeneous generating subset of `gens`.
pub fn minimalize_generators(
    gens: &[ModuleElement],
    module: &FreeModule,
    config: &GbConfig,
) -> Result<Vec<ModuleElement>> {
    let idx = minimal_generator_indices(gens, module, config)?;
    Ok(idx.into_iter().map(|i| gens[i].clone()).collect())
}

/// Raw syzygy candidates of `mains` (elements of the module with order
/// `order`) as tags in a module with shifts `tag_shifts`.
pub(crate) fn syzygy_candidates(
    mains: Vec<SVec>,
    nvars: usize,
    order: &ModuleOrder,
    tag_shifts: &[i64],
    config: &GbConfig,
) -> Result<(ModuleOrder, Vec<SVec>)> {
    let tag_order = ModuleOrder::new(config.order, tag_shifts.to_vec());
    let inputs = mains
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, SVec::unit(nvars, i)))
        .collect();
    let out = Buchberger::new(nvars, order, Some(&tag_order), config).run(inputs)?;
    Ok((tag_order, out.syzygies))
}

/// Minimal generators of the syzygy module of `gens`, living in the free
/// module whose `i`-th generator has the degree of `gens[i]` (degree 0 for
/// zero generators).
pub fn syzygy_module(
    gens: &[ModuleElement],
    module: &FreeModule,
    config: &GbConfig,
) -> Result<SubmodulePresentation> {
    check_elements(gens, module)?;
    let shifts: Vec<i64> = gens.iter().map(|g| g.degree(module).unwrap_or(0)).collect();
    syzygies_with_shifts(gens, module, shifts, config)
}

fn syzygies_with_shifts(
    gens: &[ModuleElement],
    module: &FreeModule,
    shifts: Vec<i64>,
    config: &GbConfig,
) -> Result<SubmodulePresentation> {
    let order = module.order(config.order);
    let mains = gens.iter().map(|g| g.to_svec(&order)).collect();
    let source = FreeModule::new(module.nvars(), shifts);
    let (tag_order, cands) = syzygy_candidates(mains, module.nvars(), &order, source.shifts(), config)?;
    let keep = run_untracked(cands.clone(), &source, &tag_order, config)?.minimal_inputs;
    let generators = keep
        .into_iter()
        .map(|i| ModuleElement::from_svec(&cands[i], &source))
        .collect();
    Ok(SubmodulePresentation {
        ambient: source,
        generators,
    })
}

/// Kernel of the graded map `source -> target` given by `matrix`
/// (`target.rank()` rows, `source.rank()` columns).
pub fn kernel_of_map(
    matrix: &[Vec<Polynomial>],
    source: &FreeModule,
    target: &FreeModule,
    config: &GbConfig,
) -> Result<SubmodulePresentation> {
    kernel_of_map_modulo(matrix, source, target, &[], config)
}

/// Kernel of `source -> target / <relations>`, computed by appending the
/// relations as extra columns and projecting the syzygies back onto the
/// source coordinates.
pub fn kernel_of_map_modulo(
    matrix: &[Vec<Polynomial>],
    source: &FreeModule,
    target: &FreeModule,
    relations: &[ModuleElement],
    config: &GbConfig,
) -> Result<SubmodulePresentation> {
    if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
        return Err(Error::Structural("matrix dimensions do not match modules".into()));
    }
    let nvars = source.nvars();
    let mut columns: Vec<ModuleElement> = (0..source.rank())
        .map(|j| ModuleElement::new(matrix.iter().map(|row| row[j].clone()).collect()))
        .collect();
    for (j, c) in columns.iter().enumerate() {
        if let Some(d) = c.degree(target) {
            if d != source.shifts()[j] {
                return Err(Error::Precondition(format!(
                    "column {j} has degree {d} but its source generator has degree {}",
                    source.shifts()[j]
                )));
            }
        } else if !c.is_zero() {
            return Err(Error::Precondition(format!("column {j} is not homogeneous")));
        }
    }
    check_elements(relations, target)?;
    let mut shifts = source.shifts().to_vec();
    for r in relations {
        shifts.push(r.degree(target).unwrap_or(0));
        columns.push(r.clone());
    }
    let order = target.order(config.order);
    let mains = columns.iter().map(|c| c.to_svec(&order)).collect();
    let (_, cands) = syzygy_candidates(mains, nvars, &order, &shifts, config)?;
    let k = source.rank();
    let source_order = source.order(config.order);
    let projected: Vec<SVec> = cands
        .into_iter()
        .map(|c| SVec {
            terms: c.terms.into_iter().filter(|t| t.pos < k).collect(),
        })
        .filter(|c| !c.is_zero())
        .map(|mut c| {
            c.reorder(&source_order);
            c
        })
        .collect();
    let keep = run_untracked(projected.clone(), source, &source_order, config)?.minimal_inputs;
    Ok(SubmodulePresentation {
        ambient: source.clone(),
        generators: keep
            .into_iter()
            .map(|i| ModuleElement::from_svec(&projected[i], source))
            .collect(),
    })
}

/// Expresses elements of a submodule as combinations of its generators.
pub struct Lifter {
    module: FreeModule,
    order: ModuleOrder,
    tag_order: ModuleOrder,
    ngens: usize,
    basis: Vec<Elem>,
}

impl Lifter {
    pub fn new(gens: &[ModuleElement], module: &FreeModule, config: &GbConfig) -> Result<Self> {
        check_elements(gens, module)?;
        let order = module.order(config.order);
        let shifts: Vec<i64> = gens.iter().map(|g| g.degree(module).unwrap_or(0)).collect();
        let tag_order = ModuleOrder::new(config.order, shifts);
        let inputs = gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.to_svec(&order), SVec::unit(module.nvars(), i)))
            .collect();
        let out = Buchberger::new(module.nvars(), &order, Some(&tag_order), config).run(inputs)?;
        Ok(Lifter {
            module: module.clone(),
            order,
            tag_order,
            ngens: gens.len(),
            basis: out.basis,
        })
    }

    /// Coefficients `c` with `sum c_i gens_i = v`, or `None` when `v` is
    /// not in the submodule.
    pub fn lift(&self, v: &ModuleElement) -> Option<Vec<Polynomial>> {
        let reducer = Reducer::new(&self.basis, &self.order, Some(&self.tag_order));
        let (r, tag) = reducer.reduce(v.to_svec(&self.order), SVec::zero());
        if !r.is_zero() {
            return None;
        }
        let coeffs = tag.to_components(self.ngens, self.module.nvars());
        Some(coeffs.into_iter().map(|p| p.neg()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Polynomial {
        Polynomial::parse(n, s).unwrap()
    }

    fn ideal(n: usize, gens: &[&str]) -> Vec<ModuleElement> {
        gens.iter().map(|g| ModuleElement::new(vec![p(n, g)])).collect()
    }

    #[test]
    fn monomial_generators_are_their_own_basis() {
        let m = FreeModule::free(2, 1);
        let gb = groebner_basis(&ideal(2, &["x1", "x2"]), &m, &GbConfig::default()).unwrap();
        assert_eq!(gb.len(), 2);
        assert!(gb.is_groebner());
    }

    #[test]
    fn empty_generators() {
        let m = FreeModule::free(3, 2);
        let gb = groebner_basis(&[], &m, &GbConfig::default()).unwrap();
        assert!(gb.is_empty());
    }

    #[test]
    fn normal_form_cases() {
        let m = FreeModule::free(2, 1);
        let gens = ideal(2, &["x1"]);
        let gb = groebner_basis(&gens, &m, &GbConfig::default()).unwrap();
        assert!(gb.normal_form(&ideal(2, &["x1^2"])[0]).is_zero());
        assert!(gb.normal_form(&gens[0]).is_zero());
        assert_eq!(gb.normal_form(&ideal(2, &["x1*x2 + x2^2"])[0]), ideal(2, &["x2^2"])[0]);
    }

    #[test]
    fn koszul_syzygy() {
        let m = FreeModule::free(2, 1);
        let syz = syzygy_module(&ideal(2, &["x1", "x2"]), &m, &GbConfig::default()).unwrap();
        assert_eq!(syz.generators.len(), 1);
        let s = &syz.generators[0];
        // (x2, -x1) up to sign
        let expected = ModuleElement::new(vec![p(2, "x2"), p(2, "-x1")]);
        assert!(*s == expected || *s == expected.scale(&Rational::from_int(-1)));
        assert_eq!(syz.ambient.shifts(), &[1, 1]);
    }

    #[test]
    fn free_basis_has_no_syzygies() {
        let m = FreeModule::free(2, 2);
        let gens = vec![ModuleElement::unit(2, 2, 0), ModuleElement::unit(2, 2, 1)];
        let syz = syzygy_module(&gens, &m, &GbConfig::default()).unwrap();
        assert!(syz.generators.is_empty());
    }

    #[test]
    fn kernels() {
        let cfg = GbConfig::default();
        let src = FreeModule::free(2, 2);
        let id = vec![
            vec![Polynomial::one(2), Polynomial::zero(2)],
            vec![Polynomial::zero(2), Polynomial::one(2)],
        ];
        assert!(kernel_of_map(&id, &src, &src, &cfg).unwrap().generators.is_empty());
        let zero = vec![vec![Polynomial::zero(2), Polynomial::zero(2)]];
        let tgt = FreeModule::free(2, 1);
        assert_eq!(kernel_of_map(&zero, &src, &tgt, &cfg).unwrap().generators.len(), 2);
        let row = vec![vec![p(2, "x1"), p(2, "x2")]];
        let src1 = FreeModule::new(2, vec![1, 1]);
        let k = kernel_of_map(&row, &src1, &tgt, &cfg).unwrap();
        assert_eq!(k.generators.len(), 1);
        let g = &k.generators[0];
        assert!(g.components[0].mul(&p(2, "x1")).add(&g.components[1].mul(&p(2, "x2"))).is_zero());
    }

    #[test]
    fn minimalize() {
        let m = FreeModule::free(2, 1);
        let cfg = GbConfig::default();
        let g = minimalize_generators(&ideal(2, &["x1", "x1^2"]), &m, &cfg).unwrap();
        assert_eq!(g, ideal(2, &["x1"]));
        let g = minimalize_generators(&ideal(2, &["x1", "x2"]), &m, &cfg).unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn textbook_membership() {
        // (x^2 - y, x^3 - z) contains x*y - z
        let m = FreeModule::free(3, 1);
        let gens = ideal(3, &["x1^2 - x2*x3", "x1^3 - x3^3"]);
        let gb = groebner_basis(&gens, &m, &GbConfig::default()).unwrap();
        assert!(gb.is_groebner());
        assert!(gb.contains(&ideal(3, &["x1*x2*x3 - x3^3"])[0]));
        assert!(!gb.contains(&ideal(3, &["x1*x2 - x3^2"])[0]));
    }

    #[test]
    fn lifting_recovers_combination() {
        let m = FreeModule::free(2, 1);
        let gens = ideal(2, &["x1^2", "x1*x2 + x2^2"]);
        let lifter = Lifter::new(&gens, &m, &GbConfig::default()).unwrap();
        let v = ideal(2, &["x1^3 + x1^2*x2 + x1*x2^2"])[0].clone();
        let c = lifter.lift(&v).unwrap();
        let back = ModuleElement::combination(&c, &gens, 2, 1);
        assert_eq!(back, v);
        assert!(lifter.lift(&ideal(2, &["x2^2"])[0]).is_none());
    }
}
