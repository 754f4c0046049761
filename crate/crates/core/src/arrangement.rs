//! Central (multi)arrangements of hyperplanes in `Q^l`.

use std::fmt;

use num_integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ratpoly::linalg::rref;
use crate::ratpoly::{Polynomial, Rational};

/// Linear form `sum c_i x_i`, primitive with first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    coeffs: Vec<i64>,
}

impl Hyperplane {
    /// Canonical representative of the class of `coeffs`; `None` for zero.
    pub fn new(coeffs: Vec<i64>) -> Option<Self> {
        let g = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return None;
        }
        let first = *coeffs.iter().find(|&&c| c != 0).unwrap();
        let g = if first < 0 { -g } else { g };
        Some(Hyperplane {
            coeffs: coeffs.into_iter().map(|c| c / g).collect(),
        })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn ell(&self) -> usize {
        self.coeffs.len()
    }

    pub fn linear_form(&self) -> Polynomial {
        Polynomial::linear_form(&self.coeffs)
    }

    fn rational_row(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|&c| Rational::from_int(c)).collect()
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.linear_form().render())
    }
}

/// Distinct hyperplanes in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrangement {
    ell: usize,
    hyperplanes: Vec<Hyperplane>,
}

/// Multiplicities aligned with [`Arrangement::hyperplanes`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiplicity(pub Vec<u32>);

impl Multiplicity {
    pub fn simple(n: usize) -> Self {
        Multiplicity(vec![1; n])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&m| m as u64).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.0.iter().all(|&m| m == 1)
    }
}

/// An arrangement together with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiArrangement {
    pub arrangement: Arrangement,
    pub multiplicity: Multiplicity,
}

impl MultiArrangement {
    pub fn simple(arrangement: Arrangement) -> Self {
        let multiplicity = Multiplicity::simple(arrangement.len());
        MultiArrangement {
            arrangement,
            multiplicity,
        }
    }

    pub fn ell(&self) -> usize {
        self.arrangement.ell()
    }

    /// `|m|`.
    pub fn total(&self) -> u64 {
        self.multiplicity.total()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (arrangement, multiplicity) = parse(text)?;
        Ok(MultiArrangement {
            arrangement,
            multiplicity,
        })
    }

    pub fn render(&self) -> String {
        render(&self.arrangement, &self.multiplicity)
    }

    pub fn defining_polynomial(&self) -> Polynomial {
        defining_polynomial(&self.arrangement, &self.multiplicity)
    }

    pub fn is_essential(&self) -> bool {
        self.arrangement.is_essential()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Hyperplane, u32)> {
        self.arrangement
            .hyperplanes
            .iter()
            .zip(self.multiplicity.0.iter().copied())
    }
}

impl Arrangement {
    /// Canonicalizes and sorts; errors on zero forms, wrong lengths and
    /// repeated hyperplanes.
    pub fn new(ell: usize, forms: Vec<Vec<i64>>) -> Result<Self> {
        let (a, _) = build(ell, forms.into_iter().map(|f| (f, 1, 0)).collect())?;
        Ok(a)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn position(&self, h: &Hyperplane) -> Option<usize> {
        self.hyperplanes.binary_search(h).ok()
    }

    pub fn rank(&self) -> usize {
        rank_of(self.hyperplanes.iter())
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.ell
    }
}

pub(crate) fn rank_of<'a>(hs: impl Iterator<Item = &'a Hyperplane>) -> usize {
    let mut rows: Vec<Vec<Rational>> = hs.map(Hyperplane::rational_row).collect();
    rref(&mut rows).len()
}

/// `(coeffs, multiplicity, source line)`; line 0 means "no line".
fn build(ell: usize, items: Vec<(Vec<i64>, u32, usize)>) -> Result<(Arrangement, Multiplicity)> {
    let mut pairs: Vec<(Hyperplane, u32, usize)> = Vec::with_capacity(items.len());
    for (coeffs, m, line) in items {
        let err = |message: String| {
            if line > 0 {
                Error::Parse { line, message }
            } else {
                Error::Input(message)
            }
        };
        if coeffs.len() != ell {
            return Err(err(format!("expected {ell} coefficients, found {}", coeffs.len())));
        }
        if m == 0 {
            return Err(err("multiplicity must be positive".into()));
        }
        let Some(h) = Hyperplane::new(coeffs) else {
            return Err(err("zero row does not define a hyperplane".into()));
        };
        if let Some((_, _, first)) = pairs.iter().find(|(g, _, _)| *g == h) {
            return Err(err(if *first > 0 {
                format!("duplicate hyperplane {h} (first on line {first})")
            } else {
                format!("duplicate hyperplane {h}")
            }));
        }
        pairs.push((h, m, line));
    }
    pairs.sort();
    let (hyperplanes, mult) = pairs.into_iter().map(|(h, m, _)| (h, m)).unzip();
    Ok((Arrangement { ell, hyperplanes }, Multiplicity(mult)))
}

/// Reads the text format: `#` comments, `ell <int>`, then
/// `H c1 .. cl [m=<int>]` lines.
pub fn parse(text: &str) -> Result<(Arrangement, Multiplicity)> {
    let mut ell: Option<usize> = None;
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let perr = |message: String| Error::Parse { line, message };
        let mut words = content.split_whitespace();
        let head = words.next().unwrap();
        match (head, ell) {
            ("ell", None) => {
                let v = words
                    .next()
                    .ok_or_else(|| perr("missing value after `ell`".into()))?;
                let v: usize = v.parse().map_err(|_| perr(format!("invalid dimension `{v}`")))?;
                if v == 0 {
                    return Err(perr("dimension must be positive".into()));
                }
                if let Some(extra) = words.next() {
                    return Err(perr(format!("unexpected `{extra}`")));
                }
                ell = Some(v);
            }
            ("ell", Some(_)) => return Err(perr("repeated `ell` directive".into())),
            (_, None) => return Err(perr("first directive must be `ell <int>`".into())),
            ("H", Some(l)) => {
                let mut coeffs = Vec::with_capacity(l);
                let mut mult: Option<u32> = None;
                for w in words {
                    if let Some(m) = w.strip_prefix("m=") {
                        if mult.is_some() {
                            return Err(perr("repeated multiplicity".into()));
                        }
                        mult = Some(m.parse().map_err(|_| perr(format!("invalid multiplicity `{m}`")))?);
                    } else if mult.is_some() {
                        return Err(perr(format!("unexpected `{w}`")));
                    } else {
                        coeffs.push(w.parse::<i64>().map_err(|_| perr(format!("invalid coefficient `{w}`")))?);
                    }
                }
                items.push((coeffs, mult.unwrap_or(1), line));
            }
            (other, Some(_)) => return Err(perr(format!("unknown directive `{other}`"))),
        }
    }
    let ell = ell.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `ell` directive".into(),
    })?;
    build(ell, items)
}

pub fn render(a: &Arrangement, m: &Multiplicity) -> String {
    let mut out = format!("ell {}\n", a.ell);
    for (h, &k) in a.hyperplanes.iter().zip(&m.0) {
        out.push('H');
        for c in &h.coeffs {
            out.push_str(&format!(" {c}"));
        }
        if k != 1 {
            out.push_str(&format!(" m={k}"));
        }
        out.push('\n');
    }
    out
}

/// Restricts the forms to the span of the pivot coordinates of the row
/// space, which is a complement of the common center.
pub fn essentialize(a: &Arrangement, m: &Multiplicity) -> (Arrangement, Multiplicity) {
    let mut rows: Vec<Vec<Rational>> = a.hyperplanes.iter().map(Hyperplane::rational_row).collect();
    let pivots = rref(&mut rows);
    let items = a
        .hyperplanes
        .iter()
        .zip(&m.0)
        .map(|(h, &k)| (pivots.iter().map(|&p| h.coeffs[p]).collect(), k, 0))
        .collect();
    build(pivots.len(), items).expect("projection to a complement of the center is injective")
}

pub fn delete(a: &Arrangement, m: &Multiplicity, h: &Hyperplane) -> Result<(Arrangement, Multiplicity)> {
    let i = a
        .position(h)
        .ok_or_else(|| Error::Input(format!("hyperplane {h} is not in the arrangement")))?;
    let mut hs = a.hyperplanes.clone();
    let mut ms = m.0.clone();
    hs.remove(i);
    ms.remove(i);
    Ok((Arrangement { ell: a.ell, hyperplanes: hs }, Multiplicity(ms)))
}

/// `A^H` in coordinates `x_j, j != i` on `H`, where `i` is the first
/// nonzero coordinate of `alpha_H`.
pub fn restrict(a: &Arrangement, m: &Multiplicity, h: &Hyperplane) -> Result<Arrangement> {
    if !m.is_simple() {
        return Err(Error::Precondition("restriction is defined for simple arrangements only".into()));
    }
    if a.position(h).is_none() {
        return Err(Error::Input(format!("hyperplane {h} is not in the arrangement")));
    }
    if a.ell < 2 {
        return Ok(Arrangement { ell: 0, hyperplanes: Vec::new() });
    }
    let i = h.coeffs.iter().position(|&c| c != 0).unwrap();
    let ai = h.coeffs[i];
    let mut traces: Vec<Hyperplane> = Vec::new();
    for g in &a.hyperplanes {
        if g == h {
            continue;
        }
        let gi = g.coeffs[i];
        let form: Vec<i64> = (0..a.ell)
            .filter(|&j| j != i)
            .map(|j| ai * g.coeffs[j] - gi * h.coeffs[j])
            .collect();
        if let Some(t) = Hyperplane::new(form) {
            if !traces.contains(&t) {
                traces.push(t);
            }
        }
    }
    traces.sort();
    Ok(Arrangement {
        ell: a.ell - 1,
        hyperplanes: traces,
    })
}

/// `(A1, m1) x (A2, m2)` in `K^{l1} + K^{l2}`, the second factor on the
/// trailing coordinates.
pub fn product(a: &MultiArrangement, b: &MultiArrangement) -> MultiArrangement {
    let (l1, l2) = (a.ell(), b.ell());
    let mut items = Vec::new();
    for (h, m) in a.pairs() {
        let mut c = h.coeffs().to_vec();
        c.resize(l1 + l2, 0);
        items.push((c, m, 0));
    }
    for (h, m) in b.pairs() {
        let mut c = vec![0; l1];
        c.extend_from_slice(h.coeffs());
        items.push((c, m, 0));
    }
    let (arrangement, multiplicity) = build(l1 + l2, items).expect("factors are valid");
    MultiArrangement {
        arrangement,
        multiplicity,
    }
}

/// Irreducible factors: connected components of the matroid, read off
/// from the fundamental circuits of a greedy basis.
pub fn decompose_product(a: &Arrangement, m: &Multiplicity) -> Vec<(Arrangement, Multiplicity)> {
    components(a)
        .into_iter()
        .map(|block| {
            (
                Arrangement {
                    ell: a.ell,
                    hyperplanes: block.iter().map(|&i| a.hyperplanes[i].clone()).collect(),
                },
                Multiplicity(block.iter().map(|&i| m.0[i]).collect()),
            )
        })
        .collect()
}

/// Index blocks of the matroid components, each sorted, blocks ordered by
/// their first index.
pub fn components(a: &Arrangement) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut cand: Vec<&Hyperplane> = basis.iter().map(|&b| &a.hyperplanes[b]).collect();
        cand.push(&a.hyperplanes[i]);
        if rank_of(cand.into_iter()) == basis.len() + 1 {
            basis.push(i);
            continue;
        }
        // coefficients of h_i in the basis: solve via the rref of [B^T | h]
        let ell = a.ell;
        let k = basis.len();
        let mut mat: Vec<Vec<Rational>> = (0..ell)
            .map(|r| {
                let mut row: Vec<Rational> = basis
                    .iter()
                    .map(|&b| Rational::from_int(a.hyperplanes[b].coeffs[r]))
                    .collect();
                row.push(Rational::from_int(a.hyperplanes[i].coeffs[r]));
                row
            })
            .collect();
        let pivots = rref(&mut mat);
        for (row, &p) in pivots.iter().enumerate() {
            if p < k && !mat[row][k].is_zero() {
                let (x, y) = (find(&mut parent, i), find(&mut parent, basis[p]));
                parent[x] = y;
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_block[r] {
            Some(b) => blocks[b].push(i),
            None => {
                root_block[r] = Some(blocks.len());
                blocks.push(vec![i]);
            }
        }
    }
    blocks
}

pub fn is_irreducible(a: &Arrangement) -> bool {
    components(a).len() <= 1
}

/// `Q(A, m) = prod alpha_H^{m(H)}`.
pub fn defining_polynomial(a: &Arrangement, m: &Multiplicity) -> Polynomial {
    let mut q = Polynomial::one(a.ell);
    for (h, &k) in a.hyperplanes.iter().zip(&m.0) {
        q = q.mul(&h.linear_form().pow(k));
    }
    q
}

/// Random essential simple arrangement with `n >= ell` hyperplanes and
/// coefficients in `[-bound, bound]`. Panics when `n` distinct hyperplanes
/// do not exist in that range.
pub fn random_essential<R: Rng>(ell: usize, n: usize, bound: i64, rng: &mut R) -> Arrangement {
    assert!(n >= ell && ell > 0 && bound > 0);
    assert!(
        (n as u128) <= hyperplane_count(ell, bound),
        "only {} hyperplanes have coefficients in [-{bound}, {bound}]",
        hyperplane_count(ell, bound)
    );
    loop {
        let mut hs: Vec<Hyperplane> = Vec::new();
        let mut guard = 0;
        while hs.len() < n && guard < 1000 {
            guard += 1;
            let coeffs: Vec<i64> = (0..ell).map(|_| rng.gen_range(-bound..=bound)).collect();
            if let Some(h) = Hyperplane::new(coeffs) {
                if !hs.contains(&h) {
                    hs.push(h);
                }
            }
        }
        hs.sort();
        let a = Arrangement { ell, hyperplanes: hs };
        if a.len() == n && a.is_essential() {
            return a;
        }
    }
}

/// Number of hyperplanes in `K^ell` with a primitive normal in
/// `[-bound, bound]^ell`: half the nonzero vectors, counted by
/// inclusion-exclusion on the gcd.
fn hyperplane_count(ell: usize, bound: i64) -> u128 {
    let mut count = 0i128;
    for g in 1..=bound {
        let mu = moebius(g);
        if mu != 0 {
            let side = 2 * (bound / g) + 1;
            count += mu as i128 * ((side as i128).pow(ell as u32) - 1);
        }
    }
    (count / 2) as u128
}

fn moebius(mut n: i64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        -mu
    } else {
        mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "ell 3\nH 1 0 0\nH 0 1 0\nH 0 0 1\nH 1 1 1\n";

    #[test]
    fn parse_ex1() {
        let (a, m) = parse(EX1).unwrap();
        assert_eq!(a.len(), 4);
        assert!(m.is_simple());
        assert_eq!(defining_polynomial(&a, &m).degree(), crate::ratpoly::Degree::Finite(4));
        assert!(a.is_essential());
        assert!(is_irreducible(&a));
    }

    #[test]
    fn canonicalization_and_errors() {
        let (a, _) = parse("ell 3\nH 2 0 0\n").unwrap();
        assert_eq!(a.hyperplanes()[0].coeffs(), &[1, 0, 0]);
        let (a, _) = parse("ell 2\nH -1 2\n").unwrap();
        assert_eq!(a.hyperplanes()[0].coeffs(), &[1, -2]);
        match parse("ell 3\nH 1 0 0\n# c\nH 1 0 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("ell 2\nH 0 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("ell 2\nH 1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("H 1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("ell 2\nH 1 0 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn multiplicities() {
        let (a, m) = parse("ell 2\nH 0 1 m=2\nH 1 0 m=3\n").unwrap();
        assert_eq!(a.hyperplanes()[0].coeffs(), &[0, 1]);
        assert_eq!(m.0, vec![2, 3]);
        let text = render(&a, &m);
        assert_eq!(parse(&text).unwrap(), (a, m));
        let (a, m) = parse("ell 1\nH 1 m=3\n").unwrap();
        assert_eq!(defining_polynomial(&a, &m), Polynomial::parse(1, "x1^3").unwrap());
    }

    #[test]
    fn rank_and_essentialize() {
        let a = Arrangement::new(3, vec![vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]).unwrap();
        assert_eq!(a.rank(), 2);
        assert!(!a.is_essential());
        let (e, _) = essentialize(&a, &Multiplicity::simple(3));
        assert_eq!(e.ell(), 2);
        assert_eq!(e.len(), 3);
        assert!(e.is_essential());
        let x = Arrangement::new(2, vec![vec![1, 0]]).unwrap();
        let (e, _) = essentialize(&x, &Multiplicity::simple(1));
        assert_eq!(e, Arrangement::new(1, vec![vec![1]]).unwrap());
    }

    #[test]
    fn delete_and_restrict() {
        let (a, m) = parse(EX1).unwrap();
        let h = Hyperplane::new(vec![1, 0, 0]).unwrap();
        let (d, dm) = delete(&a, &m, &h).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(dm.0.len(), 3);
        assert!(delete(&d, &dm, &h).is_err());
        let b = Arrangement::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let r = restrict(&b, &Multiplicity::simple(3), &h).unwrap();
        assert_eq!(r, Arrangement::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap());
        // ex1 restricted to x = 0: traces y, z, y+z
        let r = restrict(&a, &m, &h).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn products() {
        let b = Arrangement::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(components(&b).len(), 3);
        let a = Arrangement::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let f = decompose_product(&a, &Multiplicity::simple(4));
        assert_eq!(f.len(), 2);
        let sizes: Vec<usize> = f.iter().map(|(x, _)| x.len()).collect();
        assert!(sizes.contains(&3) && sizes.contains(&1));
    }

    #[test]
    fn hyperplane_counts() {
        assert_eq!(hyperplane_count(1, 2), 1);
        assert_eq!(hyperplane_count(2, 2), 8);
        let brute = (-2i64..=2)
            .flat_map(|a| (-2i64..=2).flat_map(move |b| (-2i64..=2).map(move |c| vec![a, b, c])))
            .filter_map(Hyperplane::new)
            .collect::<std::collections::BTreeSet<_>>();
        assert_eq!(hyperplane_count(3, 2), brute.len() as u128);
    }
}
