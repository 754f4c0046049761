use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{
    minimal_generator_indices, syzygy_candidates, FreeModule, GbConfig, ModuleElement,
};
use crate::error::{Error, Result};
use crate::ratpoly::{LaurentPolynomial, Rational, RationalSeries};

/// Minimal graded free resolution `0 <- M <- F_0 <- F_1 <- ... <- F_p <- 0`
/// of a submodule `M` of `ambient`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ambient: FreeModule,
    pub modules: Vec<FreeModule>,
    /// `maps[i][j]` is the image of the `j`-th generator of `F_i` in
    /// `F_{i-1}` (in `ambient` for `i = 0`).
    pub maps: Vec<Vec<ModuleElement>>,
}

impl Resolution {
    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (i, f) in self.modules.iter().enumerate() {
            for &d in f.shifts() {
                *entries.entry((i, d)).or_insert(0) += 1;
            }
        }
        BettiTable { entries }
    }

    /// Length of the resolution; `None` for the zero module.
    pub fn pd(&self) -> Option<usize> {
        self.betti().pd()
    }

    pub fn reg(&self) -> Option<i64> {
        self.betti().reg()
    }

    pub fn generators(&self) -> &[ModuleElement] {
        self.maps.first().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks `d_{i-1} d_i = 0`, the absence of constant entries in
    /// `d_i` for `i >= 1`, and `pd <= nvars`.
    pub fn audit(&self) -> Result<()> {
        if self.modules.len() > self.nvars() + 1 {
            return Err(Error::Internal(format!(
                "resolution of length {} over {} variables",
                self.modules.len() - 1,
                self.nvars()
            )));
        }
        for i in 1..self.maps.len() {
            let prev = &self.maps[i - 1];
            let target = if i == 1 { &self.ambient } else { &self.modules[i - 2] };
            for (j, col) in self.maps[i].iter().enumerate() {
                if col.has_nonzero_constant() {
                    return Err(Error::Internal(format!(
                        "differential {i} column {j} has a constant entry"
                    )));
                }
                let img = ModuleElement::combination(&col.components, prev, self.nvars(), target.rank());
                if !img.is_zero() {
                    return Err(Error::Internal(format!(
                        "composite of differentials {} and {i} is nonzero",
                        i - 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Resolution of the same module with all internal degrees moved by `k`.
    pub fn shifted(&self, k: i64) -> Resolution {
        let shift = |f: &FreeModule| {
            FreeModule::new(f.nvars(), f.shifts().iter().map(|s| s + k).collect())
        };
        Resolution {
            ambient: shift(&self.ambient),
            modules: self.modules.iter().map(shift).collect(),
            maps: self.maps.clone(),
        }
    }
}

/// Graded Betti numbers `beta_{i,d}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64), u64>,
}

#[derive(Serialize)]
struct BettiEntry {
    i: usize,
    d: i64,
    count: u64,
}

#[derive(Serialize)]
struct BettiJson {
    betti: Vec<BettiEntry>,
    pd: Option<usize>,
    reg: Option<i64>,
}

impl BettiTable {
    pub fn get(&self, i: usize, d: i64) -> u64 {
        self.entries.get(&(i, d)).copied().unwrap_or(0)
    }

    pub fn pd(&self) -> Option<usize> {
        self.entries.keys().map(|&(i, _)| i).max()
    }

    /// `max (d - i)` over nonzero entries.
    pub fn reg(&self) -> Option<i64> {
        self.entries.keys().map(|&(i, d)| d - i as i64).max()
    }

    pub fn total(&self, i: usize) -> u64 {
        self.entries
            .iter()
            .filter(|((j, _), _)| *j == i)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn shifted(&self, k: i64) -> BettiTable {
        BettiTable {
            entries: self.entries.iter().map(|(&(i, d), &c)| ((i, d + k), c)).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = BettiJson {
            betti: self
                .entries
                .iter()
                .map(|(&(i, d), &count)| BettiEntry { i, d, count })
                .collect(),
            pd: self.pd(),
            reg: self.reg(),
        };
        serde_json::to_value(j).expect("betti table serializes")
    }

    /// Hilbert series `sum (-1)^i beta_{i,d} x^d / (1-x)^nvars`.
    pub fn hilbert_series(&self, nvars: usize) -> RationalSeries {
        let mut num = LaurentPolynomial::zero();
        for (&(i, d), &c) in &self.entries {
            let c = Rational::from_int(if i % 2 == 0 { c as i64 } else { -(c as i64) });
            num.add_term(d, &c);
        }
        RationalSeries::new(num, nvars as u32)
    }
}

impl fmt::Display for BettiTable {
    /// Rows indexed by `d - i`, columns by `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(pd) = self.pd() else {
            return writeln!(f, "(zero module)");
        };
        let lo = self.entries.keys().map(|&(i, d)| d - i as i64).min().unwrap();
        let hi = self.reg().unwrap();
        write!(f, "{:>6}", "")?;
        for i in 0..=pd {
            write!(f, "{i:>6}")?;
        }
        writeln!(f)?;
        write!(f, "{:>6}", "total:")?;
        for i in 0..=pd {
            write!(f, "{:>6}", self.total(i))?;
        }
        writeln!(f)?;
        for r in lo..=hi {
            write!(f, "{:>6}", format!("{r}:"))?;
            for i in 0..=pd {
                match self.get(i, r + i as i64) {
                    0 => write!(f, "{:>6}", ".")?,
                    c => write!(f, "{c:>6}")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Minimal graded free resolution of the submodule of `ambient`
/// generated by `gens`. Each stage keeps a minimal generating subset of
/// the syzygies of the previous one, so the differentials carry no
/// constant entries.
pub fn minimal_free_resolution(
    gens: &[ModuleElement],
    ambient: &FreeModule,
    config: &GbConfig,
) -> Result<Resolution> {
    let nvars = ambient.nvars();
    let keep = minimal_generator_indices(gens, ambient, config)?;
    let mut current: Vec<ModuleElement> = keep.into_iter().map(|i| gens[i].clone()).collect();
    let mut current_module = ambient.clone();
    let mut modules = Vec::new();
    let mut maps = Vec::new();
    while !current.is_empty() {
        let shifts: Vec<i64> = current
            .iter()
            .map(|g| g.degree(&current_module).expect("nonzero homogeneous"))
            .collect();
        let f = FreeModule::new(nvars, shifts);
        modules.push(f.clone());
        maps.push(current.clone());
        if modules.len() > nvars + 1 {
            return Err(Error::Internal("resolution longer than the number of variables".into()));
        }
        let order = current_module.order(config.order);
        let mains = current.iter().map(|g| g.to_svec(&order)).collect();
        let (_, cands) = syzygy_candidates(mains, nvars, &order, f.shifts(), config)?;
        let cands: Vec<ModuleElement> = cands
            .iter()
            .map(|c| ModuleElement::from_svec(c, &f))
            .collect();
        let keep = minimal_generator_indices(&cands, &f, config)?;
        current = keep.into_iter().map(|i| cands[i].clone()).collect();
        current_module = f;
    }
    let res = Resolution {
        ambient: ambient.clone(),
        modules,
        maps,
    };
    res.audit()?;
    Ok(res)
}

/// Hilbert series of the resolved module.
pub fn hilbert_series(res: &Resolution) -> RationalSeries {
    res.betti().hilbert_series(res.nvars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::groebner_basis;
    use crate::ratpoly::Polynomial;

    fn ideal(n: usize, gens: &[&str]) -> Vec<ModuleElement> {
        gens.iter()
            .map(|g| ModuleElement::new(vec![Polynomial::parse(n, g).unwrap()]))
            .collect()
    }

    #[test]
    fn koszul_complex() {
        let m = FreeModule::free(3, 1);
        let res = minimal_free_resolution(&ideal(3, &["x1", "x2", "x3"]), &m, &GbConfig::default()).unwrap();
        let b = res.betti();
        assert_eq!(b.get(0, 1), 3);
        assert_eq!(b.get(1, 2), 3);
        assert_eq!(b.get(2, 3), 1);
        assert_eq!(b.pd(), Some(2));
        assert_eq!(b.reg(), Some(1));
    }

    #[test]
    fn free_module_input() {
        let m = FreeModule::new(2, vec![0, 0]);
        let gens = vec![
            ModuleElement::new(vec![Polynomial::parse(2, "x1").unwrap(), Polynomial::zero(2)]),
            ModuleElement::new(vec![Polynomial::zero(2), Polynomial::parse(2, "x2^3").unwrap()]),
        ];
        let res = minimal_free_resolution(&gens, &m, &GbConfig::default()).unwrap();
        assert_eq!(res.pd(), Some(0));
        assert_eq!(res.reg(), Some(3));
    }

    #[test]
    fn hilbert_series_of_free_module() {
        let m = FreeModule::free(3, 1);
        let res = minimal_free_resolution(&ideal(3, &["x1^2 + x2*x3"]), &m, &GbConfig::default()).unwrap();
        let h = hilbert_series(&res);
        assert_eq!(h.numerator(), &LaurentPolynomial::x_pow(2));
        assert_eq!(h.denom_power(), 3);
    }

    #[test]
    fn resolution_series_matches_lead_terms() {
        let m = FreeModule::free(3, 1);
        let gens = ideal(3, &["x1^2 - x2*x3", "x1*x2 - x3^2", "x2^2 - x1*x3"]);
        let cfg = GbConfig::default();
        let res = minimal_free_resolution(&gens, &m, &cfg).unwrap();
        let gb = groebner_basis(&gens, &m, &cfg).unwrap();
        assert_eq!(hilbert_series(&res), gb.submodule_hilbert_series());
        assert_eq!(res.betti().total(0), 3);
        assert_eq!(res.betti().total(1), 2);
    }

    #[test]
    fn json_shape() {
        let m = FreeModule::free(2, 1);
        let res = minimal_free_resolution(&ideal(2, &["x1", "x2"]), &m, &GbConfig::default()).unwrap();
        let j = res.betti().to_json();
        assert_eq!(j["pd"], 1);
        assert_eq!(j["reg"], 1);
        assert_eq!(j["betti"][0]["count"], 2);
    }

    #[test]
    fn zero_module() {
        let m = FreeModule::free(2, 1);
        let res = minimal_free_resolution(&[], &m, &GbConfig::default()).unwrap();
        assert_eq!(res.pd(), None);
        assert!(hilbert_series(&res).numerator().is_zero());
    }
}
