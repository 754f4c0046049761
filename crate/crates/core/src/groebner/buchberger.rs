//! Degree-by-degree Buchberger algorithm for homogeneous submodules of
//! graded free modules, optionally tracking cofactors ("tags") with
//! respect to the input generators so that syzygies fall out of the
//! zero reductions.

use std::collections::{BTreeMap, HashSet};

use super::vector::{ModuleOrder, SVec};
use super::GbConfig;
use crate::error::{Error, Result};
use crate::ratpoly::{Monomial, Rational};

#[derive(Clone, Debug)]
pub(crate) struct Elem {
    pub main: SVec,
    pub tag: SVec,
    pub degree: i64,
    mask: u64,
}

impl Elem {
    fn lead_mono(&self) -> &Monomial {
        &self.main.terms[0].mono
    }

    fn lead_pos(&self) -> usize {
        self.main.terms[0].pos
    }
}

pub(crate) struct Outcome {
    pub basis: Vec<Elem>,
    /// Tags of every zero reduction; they generate the syzygies of the inputs.
    pub syzygies: Vec<SVec>,
    /// Inputs that survived reduction, in input order; a minimal
    /// generating set when the inputs are homogeneous.
    pub minimal_inputs: Vec<usize>,
}

pub(crate) struct Buchberger<'a> {
    nvars: usize,
    order: &'a ModuleOrder,
    tag_order: Option<&'a ModuleOrder>,
    config: &'a GbConfig,
    basis: Vec<Elem>,
    by_pos: Vec<Vec<usize>>,
    pairs: BTreeMap<i64, Vec<(usize, usize)>>,
    pending: HashSet<(usize, usize)>,
    syzygies: Vec<SVec>,
    processed: usize,
}

impl<'a> Buchberger<'a> {
    pub fn new(
        nvars: usize,
        order: &'a ModuleOrder,
        tag_order: Option<&'a ModuleOrder>,
        config: &'a GbConfig,
    ) -> Self {
        Buchberger {
            nvars,
            order,
            tag_order,
            config,
            basis: Vec::new(),
            by_pos: vec![Vec::new(); order.rank()],
            pairs: BTreeMap::new(),
            pending: HashSet::new(),
            syzygies: Vec::new(),
            processed: 0,
        }
    }

    fn tracking(&self) -> bool {
        self.tag_order.is_some()
    }

    /// Runs the graded algorithm on `(main, tag)` inputs. Tags are ignored
    /// unless a tag order was supplied.
    pub fn run(mut self, inputs: Vec<(SVec, SVec)>) -> Result<Outcome> {
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut inputs: Vec<Option<(SVec, SVec)>> = inputs.into_iter().map(Some).collect();
        for (idx, inp) in inputs.iter().enumerate() {
            let (main, tag) = inp.as_ref().unwrap();
            if main.is_zero() {
                if self.tracking() && !tag.is_zero() {
                    self.syzygies.push(tag.clone());
                }
                continue;
            }
            if !main.is_homogeneous(self.order) {
                return Err(Error::Precondition(
                    "Gröbner engine requires homogeneous generators".into(),
                ));
            }
            by_degree
                .entry(main.degree(self.order).unwrap())
                .or_default()
                .push(idx);
        }
        let mut minimal_inputs = Vec::new();
        loop {
            let next_pair = self.pairs.keys().next().copied();
            let next_input = by_degree.keys().next().copied();
            let d = match (next_pair, next_input) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.min(b),
            };
            if d > self.config.max_degree {
                return Err(Error::Resource(format!(
                    "Gröbner computation reached degree {d} (limit {})",
                    self.config.max_degree
                )));
            }
            if next_pair == Some(d) {
                let mut batch = self.pairs.remove(&d).unwrap();
                batch.sort_unstable();
                for (i, j) in batch {
                    self.process_pair(i, j)?;
                }
                continue;
            }
            let batch = by_degree.remove(&d).unwrap();
            for idx in batch {
                let (main, tag) = inputs[idx].take().unwrap();
                let (main, tag) = self.reduce(main, tag, true);
                if main.is_zero() {
                    if self.tracking() {
                        self.syzygies.push(tag);
                    }
                } else {
                    minimal_inputs.push(idx);
                    self.insert(main, tag);
                }
            }
        }
        minimal_inputs.sort_unstable();
        Ok(Outcome {
            basis: self.basis,
            syzygies: self.syzygies,
            minimal_inputs,
        })
    }

    fn process_pair(&mut self, i: usize, j: usize) -> Result<()> {
        self.pending.remove(&(i, j));
        self.processed += 1;
        if self.processed > self.config.max_pairs {
            return Err(Error::Resource(format!(
                "more than {} S-pairs processed",
                self.config.max_pairs
            )));
        }
        let (gi, gj) = (&self.basis[i], &self.basis[j]);
        let lcm = gi.lead_mono().lcm(gj.lead_mono());
        if self.order.rank() == 1 && gi.lead_mono().is_coprime(gj.lead_mono()) {
            if let Some(tag_order) = self.tag_order {
                // Koszul relation g_j * g_i - g_i * g_j replaces the S-pair syzygy
                let pi = gi.main.to_components(1, self.nvars).pop().unwrap();
                let pj = gj.main.to_components(1, self.nvars).pop().unwrap();
                let syz = gi
                    .tag
                    .mul_poly(&pj, tag_order)
                    .sub(&gj.tag.mul_poly(&pi, tag_order), tag_order);
                if !syz.is_zero() {
                    self.syzygies.push(syz);
                }
            }
            return Ok(());
        }
        if self.chain_criterion(i, j, &lcm) {
            return Ok(());
        }
        let mi = lcm.div(gi.lead_mono());
        let mj = lcm.div(gj.lead_mono());
        let one = Rational::one();
        let mut main = gi.main.mul_term(&mi, &one);
        main.sub_mul_assign(&one, &mj, &gj.main, self.order);
        let mut tag = SVec::zero();
        if let Some(to) = self.tag_order {
            tag = gi.tag.mul_term(&mi, &one);
            tag.sub_mul_assign(&one, &mj, &gj.tag, to);
        }
        let (main, tag) = self.reduce(main, tag, true);
        if main.is_zero() {
            if self.tracking() && !tag.is_zero() {
                self.syzygies.push(tag);
            }
        } else {
            self.insert(main, tag);
        }
        Ok(())
    }

    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial) -> bool {
        let pos = self.basis[i].lead_pos();
        let mask = lcm.support_mask();
        for &k in &self.by_pos[pos] {
            if k == i || k == j {
                continue;
            }
            let gk = &self.basis[k];
            if gk.mask & !mask != 0 || !gk.lead_mono().divides(lcm) {
                continue;
            }
            let ik = (i.min(k), i.max(k));
            let jk = (j.min(k), j.max(k));
            if !self.pending.contains(&ik) && !self.pending.contains(&jk) {
                return true;
            }
        }
        false
    }

    fn insert(&mut self, mut main: SVec, mut tag: SVec) {
        let lc = main.terms[0].coeff.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            main.scale(&inv);
            tag.scale(&inv);
        }
        let lead = &main.terms[0];
        let pos = lead.pos;
        let degree = self.order.term_degree(pos, &lead.mono);
        let mask = lead.mono.support_mask();
        let lead_mono = lead.mono.clone();
        let idx = self.basis.len();
        for &k in &self.by_pos[pos] {
            let l = self.basis[k].lead_mono().lcm(&lead_mono);
            let d = l.degree() as i64 + self.order.shifts[pos];
            self.pairs.entry(d).or_default().push((k, idx));
            self.pending.insert((k, idx));
        }
        self.by_pos[pos].push(idx);
        self.basis.push(Elem {
            main,
            tag,
            degree,
            mask,
        });
    }

    fn find_reducer(&self, pos: usize, m: &Monomial) -> Option<usize> {
        find_reducer(&self.basis, &self.by_pos[pos], m)
    }

    fn reduce(&self, mut v: SVec, mut tag: SVec, full: bool) -> (SVec, SVec) {
        let mut i = 0;
        while i < v.terms.len() {
            let t = &v.terms[i];
            match self.find_reducer(t.pos, &t.mono) {
                Some(k) => {
                    let g = &self.basis[k];
                    let m = t.mono.div(g.lead_mono());
                    let c = t.coeff.clone();
                    v.sub_mul_tail(i, &c, &m, &g.main, self.order);
                    if let Some(to) = self.tag_order {
                        tag.sub_mul_assign(&c, &m, &g.tag, to);
                    }
                }
                None => {
                    if !full {
                        break;
                    }
                    i += 1;
                }
            }
        }
        (v, tag)
    }
}

fn find_reducer(basis: &[Elem], candidates: &[usize], m: &Monomial) -> Option<usize> {
    let mask = m.support_mask();
    let mut best: Option<usize> = None;
    for &k in candidates {
        let g = &basis[k];
        if g.mask & !mask != 0 || !g.lead_mono().divides(m) {
            continue;
        }
        match best {
            Some(b) if basis[b].main.terms.len() <= g.main.terms.len() => {}
            _ => best = Some(k),
        }
    }
    best
}

/// Reduction against a fixed list of monic elements, tracking tags.
pub(crate) struct Reducer<'a> {
    pub basis: &'a [Elem],
    by_pos: Vec<Vec<usize>>,
    order: &'a ModuleOrder,
    tag_order: Option<&'a ModuleOrder>,
}

impl<'a> Reducer<'a> {
    pub fn new(basis: &'a [Elem], order: &'a ModuleOrder, tag_order: Option<&'a ModuleOrder>) -> Self {
        let mut by_pos = vec![Vec::new(); order.rank()];
        for (k, e) in basis.iter().enumerate() {
            by_pos[e.lead_pos()].push(k);
        }
        Reducer {
            basis,
            by_pos,
            order,
            tag_order,
        }
    }

    /// Full normal form; returns `(remainder, tag)` where `v - remainder`
    /// equals the combination of basis elements recorded in `tag`
    /// (accumulated with negative sign into the supplied tag).
    pub fn reduce(&self, v: SVec, tag: SVec) -> (SVec, SVec) {
        self.reduce_excluding(v, tag, None)
    }

    pub fn reduce_excluding(&self, mut v: SVec, mut tag: SVec, skip: Option<usize>) -> (SVec, SVec) {
        let mut i = 0;
        while i < v.terms.len() {
            let t = &v.terms[i];
            let cands: Vec<usize>;
            let cand_ref: &[usize] = match skip {
                Some(s) => {
                    cands = self.by_pos[t.pos].iter().copied().filter(|&k| k != s).collect();
                    &cands
                }
                None => &self.by_pos[t.pos],
            };
            match find_reducer(self.basis, cand_ref, &t.mono) {
                Some(k) => {
                    let g = &self.basis[k];
                    let m = t.mono.div(g.lead_mono());
                    let c = &t.coeff / &g.main.terms[0].coeff;
                    v.sub_mul_tail(i, &c, &m, &g.main, self.order);
                    if let Some(to) = self.tag_order {
                        tag.sub_mul_assign(&c, &m, &g.tag, to);
                    }
                }
                None => i += 1,
            }
        }
        (v, tag)
    }
}

/// Drops elements whose lead is divisible by another lead and
/// tail-reduces the rest, giving the reduced Gröbner basis.
pub(crate) fn interreduce(basis: Vec<Elem>, order: &ModuleOrder) -> Vec<Elem> {
    let n = basis.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !keep[j] {
                continue;
            }
            let (a, b) = (&basis[i], &basis[j]);
            if a.lead_pos() == b.lead_pos() && b.lead_mono().divides(a.lead_mono()) {
                // equal leads: keep the earlier one
                if a.lead_mono() != b.lead_mono() || j < i {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let kept: Vec<Elem> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(e, _)| e)
        .collect();
    let reducer = Reducer::new(&kept, order, None);
    let mut out = Vec::with_capacity(kept.len());
    for (i, e) in kept.iter().enumerate() {
        // lead is irreducible by construction; reduce the tail only
        let lead = e.main.terms[0].clone();
        let tail = SVec {
            terms: e.main.terms[1..].to_vec(),
        };
        let (tail, _) = reducer.reduce_excluding(tail, SVec::zero(), Some(i));
        let mut terms = vec![lead];
        terms.extend(tail.terms);
        // tail reduction invalidates cofactors
        out.push(Elem {
            main: SVec { terms },
            tag: SVec::zero(),
            degree: e.degree,
            mask: e.mask,
        });
    }
    out
}
