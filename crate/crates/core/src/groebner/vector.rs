use std::cmp::Ordering;

use crate::ratpoly::{Monomial, Polynomial, Rational};

/// How module monomials `m e_i` are compared once their degrees
/// `deg m + shift_i` agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OrderKind {
    /// Position first (lower index is larger), then grevlex.
    #[default]
    DegPot,
    /// Grevlex first, then position.
    DegTop,
}

/// Degree-compatible monomial order on a graded free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub kind: OrderKind,
    pub shifts: Vec<i64>,
}

impl ModuleOrder {
    pub fn new(kind: OrderKind, shifts: Vec<i64>) -> Self {
        ModuleOrder { kind, shifts }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    #[inline]
    pub fn term_degree(&self, pos: usize, m: &Monomial) -> i64 {
        m.degree() as i64 + self.shifts[pos]
    }

    #[inline]
    pub fn cmp(&self, pa: usize, ma: &Monomial, pb: usize, mb: &Monomial) -> Ordering {
        let da = self.term_degree(pa, ma);
        let db = self.term_degree(pb, mb);
        da.cmp(&db).then_with(|| match self.kind {
            OrderKind::DegPot => pb.cmp(&pa).then_with(|| ma.cmp_grevlex(mb)),
            OrderKind::DegTop => ma.cmp_grevlex(mb).then_with(|| pb.cmp(&pa)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VTerm {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: Rational,
}

/// Module element as a list of terms sorted decreasingly in a
/// [`ModuleOrder`], no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SVec {
    pub terms: Vec<VTerm>,
}

impl SVec {
    pub fn zero() -> Self {
        SVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    /// Unit vector `e_pos`.
    pub fn unit(nvars: usize, pos: usize) -> Self {
        SVec {
            terms: vec![VTerm {
                pos,
                mono: Monomial::one(nvars),
                coeff: Rational::one(),
            }],
        }
    }

    pub fn from_components(components: &[Polynomial], order: &ModuleOrder) -> Self {
        let mut terms: Vec<VTerm> = components
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| {
                p.terms().iter().map(move |(m, c)| VTerm {
                    pos,
                    mono: m.clone(),
                    coeff: c.clone(),
                })
            })
            .collect();
        terms.sort_by(|a, b| order.cmp(b.pos, &b.mono, a.pos, &a.mono));
        SVec { terms }
    }

    pub fn to_components(&self, rank: usize, nvars: usize) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.pos].push((t.mono.clone(), t.coeff.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(nvars, b))
            .collect()
    }

    pub fn scale(&mut self, c: &Rational) {
        for t in &mut self.terms {
            t.coeff *= c;
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> SVec {
        SVec {
            terms: self
                .terms
                .iter()
                .map(|t| VTerm {
                    pos: t.pos,
                    mono: t.mono.mul(m),
                    coeff: &t.coeff * c,
                })
                .collect(),
        }
    }

    /// `self * p` for a polynomial `p`.
    pub fn mul_poly(&self, p: &Polynomial, order: &ModuleOrder) -> SVec {
        let mut acc = SVec::zero();
        for (m, c) in p.terms() {
            acc = acc.add(&self.mul_term(m, c), order);
        }
        acc
    }

    pub fn add(&self, other: &SVec, order: &ModuleOrder) -> SVec {
        SVec {
            terms: merge_scaled(&self.terms, other, None, &Rational::one(), order),
        }
    }

    pub fn sub(&self, other: &SVec, order: &ModuleOrder) -> SVec {
        SVec {
            terms: merge_scaled(&self.terms, other, None, &-Rational::one(), order),
        }
    }

    /// `self - c * m * other`, in place.
    pub fn sub_mul_assign(&mut self, c: &Rational, m: &Monomial, other: &SVec, order: &ModuleOrder) {
        let neg = -c;
        self.terms = merge_scaled(&self.terms, other, Some(m), &neg, order);
    }

    /// Replace `terms[from..]` by `terms[from..] - c * m * other`.
    pub(crate) fn sub_mul_tail(
        &mut self,
        from: usize,
        c: &Rational,
        m: &Monomial,
        other: &SVec,
        order: &ModuleOrder,
    ) {
        let neg = -c;
        let tail = merge_scaled(&self.terms[from..], other, Some(m), &neg, order);
        self.terms.truncate(from);
        self.terms.extend(tail);
    }

    /// Degree `deg m + shift` of the lead term (all terms for homogeneous input).
    pub fn degree(&self, order: &ModuleOrder) -> Option<i64> {
        self.lead().map(|t| order.term_degree(t.pos, &t.mono))
    }

    pub fn is_homogeneous(&self, order: &ModuleOrder) -> bool {
        match self.degree(order) {
            None => true,
            Some(d) => self.terms.iter().all(|t| order.term_degree(t.pos, &t.mono) == d),
        }
    }

    /// Re-sorts terms after a change of order.
    pub fn reorder(&mut self, order: &ModuleOrder) {
        self.terms
            .sort_by(|a, b| order.cmp(b.pos, &b.mono, a.pos, &a.mono));
    }
}

/// `a + c * m * b` as a sorted term list.
fn merge_scaled(
    a: &[VTerm],
    b: &SVec,
    m: Option<&Monomial>,
    c: &Rational,
    order: &ModuleOrder,
) -> Vec<VTerm> {
    let mut out = Vec::with_capacity(a.len() + b.terms.len());
    let scaled = |t: &VTerm| VTerm {
        pos: t.pos,
        mono: match m {
            Some(m) => t.mono.mul(m),
            None => t.mono.clone(),
        },
        coeff: &t.coeff * c,
    };
    let mut i = 0;
    let mut bi = b.terms.iter().map(scaled).peekable();
    while i < a.len() {
        let Some(tb) = bi.peek() else { break };
        let ta = &a[i];
        match order.cmp(ta.pos, &ta.mono, tb.pos, &tb.mono) {
            Ordering::Greater => {
                out.push(ta.clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bi.next().unwrap());
            }
            Ordering::Equal => {
                let tb = bi.next().unwrap();
                let s = &ta.coeff + &tb.coeff;
                if !s.is_zero() {
                    out.push(VTerm {
                        pos: ta.pos,
                        mono: tb.mono,
                        coeff: s,
                    });
                }
                i += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(bi);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pot_prefers_lower_position_then_grevlex() {
        let o = ModuleOrder::new(OrderKind::DegPot, vec![0, 0]);
        let x = Monomial::from_exponents(&[1, 0]);
        let y = Monomial::from_exponents(&[0, 1]);
        assert_eq!(o.cmp(0, &y, 1, &x), Ordering::Greater);
        assert_eq!(o.cmp(0, &x, 0, &y), Ordering::Greater);
        let shifted = ModuleOrder::new(OrderKind::DegPot, vec![0, 3]);
        assert_eq!(shifted.cmp(0, &x, 1, &y), Ordering::Less);
    }

    #[test]
    fn roundtrip_components() {
        let o = ModuleOrder::new(OrderKind::DegTop, vec![0, 1]);
        let comps = vec![
            Polynomial::parse(2, "x1^2 - x2^2").unwrap(),
            Polynomial::parse(2, "3*x2").unwrap(),
        ];
        let v = SVec::from_components(&comps, &o);
        assert!(v.is_homogeneous(&o));
        assert_eq!(v.degree(&o), Some(2));
        assert_eq!(v.to_components(2, 2), comps);
        let w = v.sub(&v, &o);
        assert!(w.is_zero());
    }
}
