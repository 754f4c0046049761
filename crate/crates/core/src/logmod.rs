//! Logarithmic derivation modules `D^p(A, m)` and logarithmic form
//! modules `Omega^p(A, m)` of a multiarrangement.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde_json::json;

use crate::arrangement::MultiArrangement;
use crate::error::{Error, Result};
use crate::groebner::{
    kernel_of_map_modulo, minimal_free_resolution, minimalize_generators, BettiTable, FreeModule,
    GbConfig, ModuleElement, Resolution,
};
use crate::ratpoly::{determinant, Polynomial, Rational, RationalSeries};

/// Increasing `p`-subsets of `0..ell` in lexicographic order.
pub fn subsets(ell: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, ell: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..ell {
            cur.push(i);
            rec(i + 1, ell, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= ell {
        rec(0, ell, p, &mut Vec::new(), &mut out);
    }
    out
}

fn subset_index(subs: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    subs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()
}

/// `(J, I, sign)` triples with `I = J + {i}` and `sign = (-1)^{pos of i in I}`.
fn slot_pattern(ell: usize, p: usize) -> Vec<(usize, usize, usize, bool)> {
    let upper = subset_index(&subsets(ell, p));
    let mut out = Vec::new();
    for (j, jset) in subsets(ell, p - 1).into_iter().enumerate() {
        for i in 0..ell {
            if jset.contains(&i) {
                continue;
            }
            let pos = jset.iter().filter(|&&k| k < i).count();
            let mut iset = jset.clone();
            iset.insert(pos, i);
            out.push((j, upper[&iset], i, pos % 2 == 1));
        }
    }
    out
}

/// `theta(alpha, x_J)` for every `(p-1)`-subset `J`, where `theta` has
/// coordinates `f` on the `∂_I`.
fn evaluate_slots(f: &[Polynomial], alpha: &[i64], ell: usize, p: usize) -> Vec<Polynomial> {
    let nj = subsets(ell, p - 1).len();
    let mut out = vec![Polynomial::zero(ell); nj];
    for (j, i_idx, i, neg) in slot_pattern(ell, p) {
        if alpha[i] == 0 || f[i_idx].is_zero() {
            continue;
        }
        let c = Rational::from_int(if neg { -alpha[i] } else { alpha[i] });
        out[j] = out[j].add(&f[i_idx].scale(&c));
    }
    out
}

/// Whether `theta = sum f_I ∂_I` lies in `D^p(A, m)`.
pub fn is_member(theta: &ModuleElement, ma: &MultiArrangement, p: usize) -> bool {
    if p == 0 {
        return true;
    }
    let ell = ma.ell();
    ma.pairs().all(|(h, m)| {
        let power = h.linear_form().pow(m);
        evaluate_slots(&theta.components, h.coeffs(), ell, p)
            .iter()
            .all(|v| v.is_divisible_by(&power).expect("same ring"))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogKind {
    D,
    Omega,
}

#[derive(Clone, Debug)]
pub struct LogModule {
    pub kind: LogKind,
    pub p: usize,
    pub ell: usize,
    /// `|m|`.
    pub total: u64,
    /// The basis `∂_I` of the ambient module, indexed like the generator
    /// coordinates. For `Omega^p` these are the `∂_I` of `D^{l-p}`.
    pub basis: Vec<Vec<usize>>,
    pub generators: Vec<ModuleElement>,
    pub resolution: Resolution,
    pub betti: BettiTable,
    pub hilbert: RationalSeries,
    pub reg: i64,
    pub pd: usize,
}

impl LogModule {
    fn from_resolution(kind: LogKind, p: usize, ma: &MultiArrangement, resolution: Resolution) -> Result<Self> {
        let betti = resolution.betti();
        let ell = ma.ell();
        let q = match kind {
            LogKind::D => p,
            LogKind::Omega => ell - p,
        };
        Ok(LogModule {
            kind,
            p,
            ell,
            total: ma.total(),
            basis: subsets(ell, q),
            generators: resolution.generators().to_vec(),
            hilbert: betti.hilbert_series(ell),
            reg: betti.reg().ok_or_else(|| Error::Internal("logarithmic module is zero".into()))?,
            pd: betti.pd().unwrap(),
            betti,
            resolution,
        })
    }

    /// Generator degrees, in order.
    pub fn degrees(&self) -> Vec<i64> {
        self.resolution.modules[0].shifts().to_vec()
    }

    pub fn basis_label(&self, k: usize) -> String {
        let names: Vec<String> = self.basis[k].iter().map(|i| format!("d{}", i + 1)).collect();
        if names.is_empty() {
            "1".into()
        } else {
            names.join("^")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<_> = self
            .generators
            .iter()
            .zip(self.degrees())
            .map(|(g, d)| {
                let comps: Vec<_> = g
                    .components
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| json!({"basis": self.basis[k], "coeff": c.to_json_terms()}))
                    .collect();
                json!({"degree": d, "components": comps})
            })
            .collect();
        json!({
            "kind": match self.kind { LogKind::D => "D", LogKind::Omega => "Omega" },
            "p": self.p,
            "ell": self.ell,
            "generators": gens,
            "resolution": self.betti.to_json(),
            "hilbert": {
                "numerator": self.hilbert.numerator_over(self.ell as u32).to_json_terms(),
                "denominator_power": self.ell,
            },
            "reg": self.reg,
            "pd": self.pd,
        })
    }
}

/// Minimal generators of `D^p(A, m)` in the basis `∂_I`, one hyperplane
/// at a time: keep the combinations of the current generators whose slot
/// values vanish modulo `alpha_H^{m(H)}`.
pub fn derivation_generators(ma: &MultiArrangement, p: usize, config: &GbConfig) -> Result<Vec<ModuleElement>> {
    let ell = ma.ell();
    if p > ell {
        return Err(Error::Input(format!("order {p} exceeds dimension {ell}")));
    }
    let rank = subsets(ell, p).len();
    let ambient = FreeModule::free(ell, rank);
    let mut gens: Vec<ModuleElement> = (0..rank).map(|i| ModuleElement::unit(ell, rank, i)).collect();
    if p == 0 {
        return Ok(gens);
    }
    let nj = subsets(ell, p - 1).len();
    let target = FreeModule::free(ell, nj);
    for (h, m) in ma.pairs() {
        let power = h.linear_form().pow(m);
        let images: Vec<Vec<Polynomial>> = gens
            .iter()
            .map(|g| evaluate_slots(&g.components, h.coeffs(), ell, p))
            .collect();
        let matrix: Vec<Vec<Polynomial>> = (0..nj)
            .map(|j| images.iter().map(|col| col[j].clone()).collect())
            .collect();
        let relations: Vec<ModuleElement> = (0..nj)
            .map(|j| {
                let mut e = ModuleElement::zero(ell, nj);
                e.components[j] = power.clone();
                e
            })
            .collect();
        let source = FreeModule::new(ell, gens.iter().map(|g| g.degree(&ambient).unwrap()).collect());
        let kernel = kernel_of_map_modulo(&matrix, &source, &target, &relations, config)?;
        let next: Vec<ModuleElement> = kernel
            .generators
            .iter()
            .map(|c| ModuleElement::combination(&c.components, &gens, ell, rank))
            .collect();
        gens = minimalize_generators(&next, &ambient, config)?;
    }
    Ok(gens)
}

/// Computes `D^p(A, m)` with its minimal resolution and audits it.
pub fn derivation_module(ma: &MultiArrangement, p: usize, config: &GbConfig) -> Result<LogModule> {
    let ell = ma.ell();
    let gens = derivation_generators(ma, p, config)?;
    for g in &gens {
        if !is_member(g, ma, p) {
            return Err(Error::Internal(format!("generator {} fails the membership audit", g.render())));
        }
    }
    let ambient = FreeModule::free(ell, subsets(ell, p).len());
    let res = minimal_free_resolution(&gens, &ambient, config)?;
    let module = LogModule::from_resolution(LogKind::D, p, ma, res)?;
    audit_d(&module, ma)?;
    Ok(module)
}

fn audit_d(module: &LogModule, ma: &MultiArrangement) -> Result<()> {
    let (ell, p) = (module.ell, module.p);
    if ma.is_essential() {
        let bound = ma.total() as i64 - ell as i64 + p as i64;
        if module.reg > bound {
            return Err(Error::Check(format!(
                "reg D^{p} = {} exceeds |m| - l + p = {bound}",
                module.reg
            )));
        }
    }
    if p >= 1 && p < ell && ell >= 2 && module.pd > ell - 2 {
        return Err(Error::Check(format!("pd D^{p} = {} exceeds l - 2", module.pd)));
    }
    if p == ell {
        let q = ma.defining_polynomial();
        let d = module.degrees();
        if d != [ma.total() as i64] || !is_scalar_multiple(&module.generators[0].components[0], &q) {
            return Err(Error::Internal(format!("D^{ell} is not generated by Q")));
        }
    }
    Ok(())
}

fn is_scalar_multiple(a: &Polynomial, b: &Polynomial) -> bool {
    match (a.leading_term(), b.leading_term()) {
        (Some((_, ca)), Some((_, cb))) => b.scale(&(ca / cb)) == *a,
        _ => false,
    }
}

/// `Omega^p(A, m)`: `D^{l-p}` with internal degrees lowered by `|m|`.
pub fn omega_from_d(d: &LogModule, ma: &MultiArrangement) -> Result<LogModule> {
    let shift = -(ma.total() as i64);
    let res = d.resolution.shifted(shift);
    let module = LogModule::from_resolution(LogKind::Omega, d.ell - d.p, ma, res)?;
    if ma.is_essential() && module.reg > -(module.p as i64) {
        return Err(Error::Check(format!(
            "reg Omega^{} = {} exceeds -{}",
            module.p, module.reg, module.p
        )));
    }
    Ok(module)
}

pub fn omega_module(ma: &MultiArrangement, p: usize, config: &GbConfig) -> Result<LogModule> {
    if p > ma.ell() {
        return Err(Error::Input(format!("order {p} exceeds dimension {}", ma.ell())));
    }
    let d = derivation_module(ma, ma.ell() - p, config)?;
    omega_from_d(&d, ma)
}

/// Outcome of the freeness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Freeness {
    pub free: bool,
    /// Generator degrees of `D(A, m)`, sorted.
    pub degrees: Vec<i64>,
    pub pd: usize,
    /// `det(theta_i(x_j)) / Q`, present when free.
    pub saito_constant: Option<Rational>,
}

/// Saito certificate for a candidate basis of `D(A, m)`: the constant
/// `det(theta_i(x_j)) / Q`, if it is a nonzero constant.
pub fn saito_certificate(basis: &[ModuleElement], ma: &MultiArrangement) -> Option<Rational> {
    let ell = ma.ell();
    if basis.len() != ell {
        return None;
    }
    let rows: Vec<Vec<Polynomial>> = basis.iter().map(|b| b.components.clone()).collect();
    let det = determinant(&rows, ell);
    let q = ma.defining_polynomial();
    let (quot, rem) = det.div_rem(&q).ok()?;
    if rem.is_zero() && quot.is_constant() && !quot.is_zero() {
        Some(quot.constant_coeff())
    } else {
        None
    }
}

pub fn freeness(d1: &LogModule, ma: &MultiArrangement) -> Result<Freeness> {
    let mut degrees = d1.degrees();
    degrees.sort_unstable();
    if d1.pd != 0 {
        return Ok(Freeness {
            free: false,
            degrees,
            pd: d1.pd,
            saito_constant: None,
        });
    }
    let c = saito_certificate(&d1.generators, ma)
        .ok_or_else(|| Error::Internal("free basis fails the Saito determinant test".into()))?;
    if degrees.iter().sum::<i64>() != ma.total() as i64 {
        return Err(Error::Internal("exponents do not sum to |m|".into()));
    }
    Ok(Freeness {
        free: true,
        degrees,
        pd: 0,
        saito_constant: Some(c),
    })
}

/// Exponents of a free `(A, m)`, or `None`.
pub fn is_free(ma: &MultiArrangement, config: &GbConfig) -> Result<Option<Vec<i64>>> {
    let d1 = derivation_module(ma, 1, config)?;
    let f = freeness(&d1, ma)?;
    Ok(f.free.then_some(f.degrees))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tameness {
    /// `pd Omega^p` for `p = 0..=l`.
    pub pd_omega: Vec<usize>,
    pub tame: bool,
}

impl Tameness {
    pub fn from_pds(pd_omega: Vec<usize>) -> Self {
        let tame = pd_omega.iter().enumerate().all(|(p, &d)| d <= p);
        Tameness { pd_omega, tame }
    }
}

pub fn is_tame(ma: &MultiArrangement, config: &GbConfig) -> Result<Tameness> {
    let pds = (0..=ma.ell())
        .map(|p| omega_module(ma, p, config).map(|m| m.pd))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tameness::from_pds(pds))
}

/// `D^p` of a free `(A, m)` as the `p`-fold wedges of a basis of `D(A, m)`.
pub fn wedge_power_free(ma: &MultiArrangement, p: usize, config: &GbConfig) -> Result<LogModule> {
    let ell = ma.ell();
    let d1 = derivation_module(ma, 1, config)?;
    if !freeness(&d1, ma)?.free {
        return Err(Error::Precondition("arrangement is not free".into()));
    }
    let basis = &d1.generators;
    let cols = subsets(ell, p);
    let gens: Vec<ModuleElement> = subsets(ell, p)
        .iter()
        .map(|k| {
            ModuleElement::new(
                cols.iter()
                    .map(|i| {
                        let rows: Vec<Vec<Polynomial>> = k
                            .iter()
                            .map(|&a| i.iter().map(|&b| basis[a].components[b].clone()).collect())
                            .collect();
                        determinant(&rows, ell)
                    })
                    .collect(),
            )
        })
        .collect();
    let ambient = FreeModule::free(ell, cols.len());
    let res = minimal_free_resolution(&gens, &ambient, config)?;
    LogModule::from_resolution(LogKind::D, p, ma, res)
}

/// `theta_E = sum x_i ∂_i`.
pub fn euler_derivation(ell: usize) -> ModuleElement {
    ModuleElement::new((0..ell).map(|i| Polynomial::variable(ell, i)).collect())
}

/// Memo of logarithmic modules keyed by canonical arrangement text.
#[derive(Default)]
pub struct Engine {
    pub config: GbConfig,
    cache: Mutex<HashMap<(String, usize), Arc<LogModule>>>,
}

impl Engine {
    pub fn new(config: GbConfig) -> Self {
        Engine {
            config,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn derivation_module(&self, ma: &MultiArrangement, p: usize) -> Result<Arc<LogModule>> {
        let key = (ma.render(), p);
        if let Some(m) = self.cache.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(derivation_module(ma, p, &self.config)?);
        self.cache.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    pub fn omega_module(&self, ma: &MultiArrangement, p: usize) -> Result<LogModule> {
        if p > ma.ell() {
            return Err(Error::Input(format!("order {p} exceeds dimension {}", ma.ell())));
        }
        let d = self.derivation_module(ma, ma.ell() - p)?;
        omega_from_d(&d, ma)
    }

    pub fn freeness(&self, ma: &MultiArrangement) -> Result<Freeness> {
        let d1 = self.derivation_module(ma, 1)?;
        freeness(&d1, ma)
    }

    pub fn tameness(&self, ma: &MultiArrangement) -> Result<Tameness> {
        let pds = (0..=ma.ell())
            .map(|p| self.derivation_module(ma, ma.ell() - p).map(|m| m.pd))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tameness::from_pds(pds))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(text: &str) -> MultiArrangement {
        MultiArrangement::parse(text).unwrap()
    }

    fn ex1() -> MultiArrangement {
        arr("ell 3\nH 1 0 0\nH 0 1 0\nH 0 0 1\nH 1 1 1\n")
    }

    fn boolean3() -> MultiArrangement {
        arr("ell 3\nH 1 0 0\nH 0 1 0\nH 0 0 1\n")
    }

    #[test]
    fn subsets_lex() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn ex1_d2_resolution() {
        let cfg = GbConfig::default();
        let d2 = derivation_module(&ex1(), 2, &cfg).unwrap();
        assert_eq!(d2.betti.get(0, 3), 4);
        assert_eq!(d2.betti.get(1, 4), 1);
        assert_eq!(d2.betti.entries.len(), 2);
        assert_eq!((d2.reg, d2.pd), (3, 1));
        let o1 = omega_from_d(&d2, &ex1()).unwrap();
        assert_eq!(o1.betti.get(0, -1), 4);
        assert_eq!(o1.betti.get(1, 0), 1);
    }

    #[test]
    fn extreme_orders() {
        let cfg = GbConfig::default();
        let ma = ex1();
        let d0 = derivation_module(&ma, 0, &cfg).unwrap();
        assert_eq!(d0.degrees(), vec![0]);
        let d3 = derivation_module(&ma, 3, &cfg).unwrap();
        assert_eq!(d3.degrees(), vec![4]);
        assert_eq!(d3.hilbert.numerator().terms().count(), 1);
    }

    #[test]
    fn boolean_is_free() {
        let cfg = GbConfig::default();
        assert_eq!(is_free(&boolean3(), &cfg).unwrap(), Some(vec![1, 1, 1]));
        assert_eq!(is_free(&ex1(), &cfg).unwrap(), None);
        let d1 = derivation_module(&boolean3(), 1, &cfg).unwrap();
        assert_eq!(d1.generators.len(), 3);
        assert!(is_tame(&boolean3(), &cfg).unwrap().tame);
    }

    #[test]
    fn euler_membership() {
        let e = euler_derivation(3);
        assert!(is_member(&e, &ex1(), 1));
        let fat = arr("ell 3\nH 1 0 0 m=2\nH 0 1 0\nH 0 0 1\nH 1 1 1\n");
        assert!(!is_member(&e, &fat, 1));
        let line = arr("ell 1\nH 1\n");
        assert_eq!(euler_derivation(1).components, vec![Polynomial::variable(1, 0)]);
        assert!(is_member(&euler_derivation(1), &line, 1));
    }

    #[test]
    fn wedge_matches_kernel_on_free() {
        let cfg = GbConfig::default();
        let ma = arr("ell 3\nH 1 0 0\nH 0 1 0\nH 1 1 0\nH 0 0 1 m=2\n");
        assert!(is_free(&ma, &cfg).unwrap().is_some());
        for p in 0..=3 {
            let a = derivation_module(&ma, p, &cfg).unwrap();
            let b = wedge_power_free(&ma, p, &cfg).unwrap();
            assert_eq!(a.hilbert, b.hilbert, "p = {p}");
        }
    }

    #[test]
    fn multiplicity_two_line() {
        // D(x^2) in one variable is generated by x^2 ∂
        let cfg = GbConfig::default();
        let d = derivation_module(&arr("ell 1\nH 1 m=2\n"), 1, &cfg).unwrap();
        assert_eq!(d.degrees(), vec![2]);
    }
}
