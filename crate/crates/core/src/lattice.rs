//! Intersection lattice and Möbius function of a simple arrangement.

use std::collections::HashMap;

use serde_json::json;

use crate::arrangement::Arrangement;
use crate::ratpoly::linalg::rref;
use crate::ratpoly::{LaurentPolynomial, Rational};

/// An intersection of hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    /// Reduced row echelon basis of the span of the member forms.
    pub equations: Vec<Vec<Rational>>,
    pub codim: usize,
    /// Bit `i` set iff hyperplane `i` contains the flat.
    pub members: u64,
}

impl Flat {
    pub fn member_indices(&self) -> Vec<usize> {
        (0..64).filter(|i| self.members >> i & 1 == 1).collect()
    }

    fn contains_flat(&self, other: &Flat) -> bool {
        // as subspaces: self ⊇ other iff members(self) ⊆ members(other)
        self.members & other.members == self.members
    }
}

#[derive(Clone, Debug)]
pub struct Lattice {
    pub ell: usize,
    /// Flats sorted by codimension, then by member mask.
    pub flats: Vec<Flat>,
    pub mu: Vec<i64>,
}

fn rows_of(a: &Arrangement, members: u64) -> Vec<Vec<Rational>> {
    a.hyperplanes()
        .iter()
        .enumerate()
        .filter(|(i, _)| members >> i & 1 == 1)
        .map(|(_, h)| h.coeffs().iter().map(|&c| Rational::from_int(c)).collect())
        .collect()
}

fn in_span(eqs: &[Vec<Rational>], codim: usize, row: Vec<Rational>) -> bool {
    let mut m = eqs.to_vec();
    m.push(row);
    rref(&mut m).len() == codim
}

fn closure(a: &Arrangement, members: u64) -> Flat {
    let mut equations = rows_of(a, members);
    if equations.is_empty() {
        return Flat {
            equations,
            codim: 0,
            members: 0,
        };
    }
    let codim = rref(&mut equations).len();
    let mut full = 0u64;
    for (i, h) in a.hyperplanes().iter().enumerate() {
        let row = h.coeffs().iter().map(|&c| Rational::from_int(c)).collect();
        if in_span(&equations, codim, row) {
            full |= 1 << i;
        }
    }
    Flat {
        equations,
        codim,
        members: full,
    }
}

/// All flats, built codimension by codimension by adding one hyperplane
/// to each flat and closing.
pub fn intersection_lattice(a: &Arrangement) -> Vec<Flat> {
    assert!(a.len() <= 64, "at most 64 hyperplanes supported");
    let mut levels: Vec<Vec<Flat>> = vec![vec![closure(a, 0)]];
    loop {
        let mut next: HashMap<u64, Flat> = HashMap::new();
        for x in levels.last().unwrap() {
            for i in 0..a.len() {
                if x.members >> i & 1 == 1 {
                    continue;
                }
                let mask = x.members | 1 << i;
                if next.values().any(|f| f.members & mask == mask) {
                    continue;
                }
                let f = closure(a, mask);
                next.insert(f.members, f);
            }
        }
        if next.is_empty() {
            break;
        }
        let mut level: Vec<Flat> = next.into_values().collect();
        level.sort_by_key(|f| f.members);
        levels.push(level);
    }
    levels.into_iter().flatten().collect()
}

/// `mu(V) = 1`, `mu(X) = -sum_{X < Y <= V} mu(Y)`.
pub fn moebius(flats: &[Flat]) -> Vec<i64> {
    let mut mu = vec![0i64; flats.len()];
    for (k, x) in flats.iter().enumerate() {
        if x.codim == 0 {
            mu[k] = 1;
            continue;
        }
        mu[k] = -flats[..k]
            .iter()
            .zip(&mu)
            .filter(|(y, _)| y.codim < x.codim && y.contains_flat(x))
            .map(|(_, m)| m)
            .sum::<i64>();
    }
    mu
}

impl Lattice {
    pub fn new(a: &Arrangement) -> Self {
        let flats = intersection_lattice(a);
        let mu = moebius(&flats);
        Lattice {
            ell: a.ell(),
            flats,
            mu,
        }
    }

    /// `sum mu(X) t^{dim X}`.
    pub fn characteristic_polynomial(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (f, &m) in self.flats.iter().zip(&self.mu) {
            p.add_term((self.ell - f.codim) as i64, &Rational::from_int(m));
        }
        p
    }

    /// `sum mu(X) (-t)^{codim X}`.
    pub fn poincare_polynomial(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (f, &m) in self.flats.iter().zip(&self.mu) {
            let sign = if f.codim % 2 == 0 { m } else { -m };
            p.add_term(f.codim as i64, &Rational::from_int(sign));
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.flats.iter().map(|f| f.codim).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let flats: Vec<_> = self
            .flats
            .iter()
            .zip(&self.mu)
            .map(|(f, m)| {
                json!({
                    "codim": f.codim,
                    "members": f.member_indices(),
                    "mu": m,
                })
            })
            .collect();
        json!({
            "ell": self.ell,
            "flats": flats,
            "chi": self.characteristic_polynomial().to_json_terms(),
            "poincare": self.poincare_polynomial().to_json_terms(),
        })
    }
}

pub fn characteristic_polynomial(a: &Arrangement) -> LaurentPolynomial {
    Lattice::new(a).characteristic_polynomial()
}

pub fn poincare_polynomial(a: &Arrangement) -> LaurentPolynomial {
    Lattice::new(a).poincare_polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn ex1() -> Arrangement {
        Arrangement::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap()
    }

    /// Member sets of all intersections, by trying every subset.
    fn brute_force(a: &Arrangement) -> BTreeSet<u64> {
        (0u64..1 << a.len()).map(|s| closure(a, s).members).collect()
    }

    #[test]
    fn boolean_plane() {
        let a = Arrangement::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let l = Lattice::new(&a);
        assert_eq!(l.flats.len(), 4);
        assert_eq!(*l.mu.last().unwrap(), 1);
        assert_eq!(l.characteristic_polynomial(), LaurentPolynomial::from_coeffs(&[1, -2, 1]));
    }

    #[test]
    fn ex1_lattice() {
        let a = ex1();
        let l = Lattice::new(&a);
        assert_eq!(l.flats.len(), 12);
        let by_codim: Vec<Vec<i64>> = (0..=3)
            .map(|k| {
                l.flats
                    .iter()
                    .zip(&l.mu)
                    .filter(|(f, _)| f.codim == k)
                    .map(|(_, &m)| m)
                    .collect()
            })
            .collect();
        assert_eq!(by_codim[1], vec![-1; 4]);
        assert_eq!(by_codim[2], vec![1; 6]);
        assert_eq!(by_codim[3], vec![-3]);
        assert_eq!(l.characteristic_polynomial().render_with("t"), "t^3 - 4*t^2 + 6*t - 3");
        let expected = LaurentPolynomial::from_coeffs(&[1, 1])
            .mul(&LaurentPolynomial::from_coeffs(&[1, 3, 3]));
        assert_eq!(l.poincare_polynomial(), expected);
        let set: BTreeSet<u64> = l.flats.iter().map(|f| f.members).collect();
        assert_eq!(set, brute_force(&a));
    }

    #[test]
    fn empty_and_single() {
        let e = Arrangement::new(2, vec![]).unwrap();
        assert_eq!(Lattice::new(&e).flats.len(), 1);
        let s = Arrangement::new(2, vec![vec![1, 1]]).unwrap();
        assert_eq!(Lattice::new(&s).mu, vec![1, -1]);
    }

    #[test]
    fn boolean_chi() {
        for ell in 1..=4 {
            let forms = (0..ell)
                .map(|i| (0..ell).map(|j| i64::from(i == j)).collect())
                .collect();
            let a = Arrangement::new(ell, forms).unwrap();
            let expected = LaurentPolynomial::from_coeffs(&[-1, 1]).pow(ell as u32);
            assert_eq!(characteristic_polynomial(&a), expected);
        }
    }
}
