use super::{leading_terms_unreduced, FreeModule, GbConfig, ModuleElement};
use crate::error::{Error, Result};
use crate::ratpoly::{LaurentPolynomial, Monomial, Polynomial};

/// Numerator `N` of the Hilbert series `N / (1-x)^n` of `S / I` for a
/// monomial ideal `I`, via `N(I + (m)) = N(I) - x^{deg m} N(I : m)`.
pub fn monomial_ideal_numerator(gens: &[Monomial], nvars: usize) -> LaurentPolynomial {
    let gens = minimal_monomials(gens.to_vec());
    numerator_rec(gens, nvars)
}

fn minimal_monomials(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn numerator_rec(gens: Vec<Monomial>, nvars: usize) -> LaurentPolynomial {
    if gens.is_empty() {
        return LaurentPolynomial::one();
    }
    if gens.iter().any(|g| g.degree() == 0) {
        return LaurentPolynomial::zero();
    }
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        let mut acc = LaurentPolynomial::one();
        for g in &gens {
            acc = acc.mul(&LaurentPolynomial::one().sub(&LaurentPolynomial::x_pow(g.degree() as i64)));
        }
        return acc;
    }
    // pivot on the generator of largest degree
    let (k, _) = gens
        .iter()
        .enumerate()
        .max_by_key(|(_, g)| g.degree())
        .unwrap();
    let mut rest = gens.clone();
    let m = rest.remove(k);
    let colon: Vec<Monomial> = rest.iter().map(|g| g.lcm(&m).div(&m)).collect();
    let a = numerator_rec(rest, nvars);
    let b = numerator_rec(minimal_monomials(colon), nvars);
    a.sub(&b.shift(m.degree() as i64))
}

/// Dimension data of `S / I` for a homogeneous ideal `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Colength {
    /// `hilbert_function[k] = dim_Q (S/I)_k`, up to the top nonzero degree.
    Finite {
        colength: u64,
        hilbert_function: Vec<u64>,
    },
    Infinite,
}

/// `dim_Q S/I` for a homogeneous ideal, by counting standard monomials.
pub fn quotient_colength(gens: &[Polynomial], nvars: usize, config: &GbConfig) -> Result<Colength> {
    let module = FreeModule::free(nvars, 1);
    let elems: Vec<ModuleElement> = gens
        .iter()
        .map(|g| ModuleElement::new(vec![g.clone()]))
        .collect();
    let leads: Vec<Monomial> = leading_terms_unreduced(&elems, &module, config)?
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    let mut pure = vec![None::<u32>; nvars];
    for m in &leads {
        if let Some(v) = m.pure_power_var() {
            let e = m.exponent(v);
            pure[v] = Some(pure[v].map_or(e, |p: u32| p.min(e)));
        }
    }
    if leads.iter().any(|m| m.degree() == 0) {
        return Ok(Colength::Finite {
            colength: 0,
            hilbert_function: Vec::new(),
        });
    }
    if pure.iter().any(Option::is_none) {
        return Ok(Colength::Infinite);
    }
    let bounds: Vec<u32> = pure.into_iter().map(Option::unwrap).collect();
    let mut hf: Vec<u64> = Vec::new();
    let mut exps = vec![0u32; nvars];
    count_standard(&leads, &bounds, &mut exps, 0, &mut hf);
    if nvars == 0 {
        hf = vec![1];
    }
    while hf.last() == Some(&0) {
        hf.pop();
    }
    let colength = hf.iter().sum();
    if colength > u32::MAX as u64 {
        return Err(Error::Resource("quotient too large to enumerate".into()));
    }
    Ok(Colength::Finite {
        colength,
        hilbert_function: hf,
    })
}

fn count_standard(leads: &[Monomial], bounds: &[u32], exps: &mut Vec<u32>, var: usize, hf: &mut Vec<u64>) {
    if var == bounds.len() {
        let m = Monomial::from_exponents(exps);
        if leads.iter().all(|l| !l.divides(&m)) {
            let d = m.degree() as usize;
            if hf.len() <= d {
                hf.resize(d + 1, 0);
            }
            hf[d] += 1;
        }
        return;
    }
    for e in 0..bounds[var] {
        exps[var] = e;
        count_standard(leads, bounds, exps, var + 1, hf);
    }
    exps[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn numerator_examples() {
        // S/(x,y) in 2 variables: 1 - 2x + x^2 = (1-x)^2
        let n = monomial_ideal_numerator(&[mono(&[1, 0]), mono(&[0, 1])], 2);
        assert_eq!(n, LaurentPolynomial::from_coeffs(&[1, -2, 1]));
        // (x^2, xy): 1 - 2t^2 + t^3
        let n = monomial_ideal_numerator(&[mono(&[2, 0]), mono(&[1, 1])], 2);
        assert_eq!(n, LaurentPolynomial::from_coeffs(&[1, 0, -2, 1]));
        assert_eq!(monomial_ideal_numerator(&[], 3), LaurentPolynomial::one());
    }

    #[test]
    fn complete_intersection_colength() {
        let gens = vec![
            Polynomial::parse(2, "x1^2").unwrap(),
            Polynomial::parse(2, "x2^3").unwrap(),
        ];
        match quotient_colength(&gens, 2, &GbConfig::default()).unwrap() {
            Colength::Finite {
                colength,
                hilbert_function,
            } => {
                assert_eq!(colength, 6);
                assert_eq!(hilbert_function, vec![1, 2, 2, 1]);
            }
            Colength::Infinite => panic!("expected finite"),
        }
        let gens = vec![Polynomial::parse(2, "x1^2").unwrap()];
        assert_eq!(
            quotient_colength(&gens, 2, &GbConfig::default()).unwrap(),
            Colength::Infinite
        );
    }
}
