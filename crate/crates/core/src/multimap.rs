//! Sparse multilinear maps `X^{⊗n} → Y` between graded bases, stored as
//! `(input word, output index) → coefficient`.
//!
//! The same container holds plain Hochschild cochains and their suspended
//! counterparts on `T(sX) → sY`; which reading applies is decided by the
//! caller. Zero coefficients are never stored, and iteration order is the
//! key order, so every computation is deterministic.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::coeff::Coeff;
use crate::exact_linalg::Rational;
use crate::graded_signs::GradedBasis;

pub type Key = (Vec<u8>, u8);

#[derive(Clone, Debug, PartialEq)]
pub struct MultiMap<C> {
    source: Arc<GradedBasis>,
    target: Arc<GradedBasis>,
    entries: BTreeMap<Key, C>,
}

impl<C: Coeff> MultiMap<C> {
    pub fn zero(source: Arc<GradedBasis>, target: Arc<GradedBasis>) -> Self {
        MultiMap {
            source,
            target,
            entries: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &Arc<GradedBasis> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedBasis> {
        &self.target
    }

    pub fn entries(&self) -> &BTreeMap<Key, C> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, ins: &[u8], out: u8) -> Option<&C> {
        self.entries.get(&(ins.to_vec(), out))
    }

    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(|(w, _)| w.len()).max().unwrap_or(0)
    }

    /// Adds `c` to the coefficient of `(ins, out)`.
    pub fn add_term(&mut self, ins: Vec<u8>, out: u8, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry((ins, out)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &MultiMap<C>) {
        for ((w, o), c) in &other.entries {
            self.add_term(w.clone(), *o, c.clone());
        }
    }

    pub fn plus(&self, other: &MultiMap<C>) -> MultiMap<C> {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn minus(&self, other: &MultiMap<C>) -> MultiMap<C> {
        let mut s = self.clone();
        s.add_assign(&other.neg());
        s
    }

    pub fn neg(&self) -> MultiMap<C> {
        self.map_coeffs(|c| Some(c.neg()))
    }

    pub fn scale(&self, r: &Rational) -> MultiMap<C> {
        self.map_coeffs(|c| Some(c.scale(r)))
    }

    pub fn mul_coeff(&self, k: &C) -> MultiMap<C> {
        self.map_coeffs(|c| Some(c.mul(k)))
    }

    /// Applies `f` to every coefficient; `None` or zero results are dropped.
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> Option<D>) -> MultiMap<D> {
        let mut entries = BTreeMap::new();
        for (k, c) in &self.entries {
            if let Some(d) = f(c) {
                if !d.is_zero() {
                    entries.insert(k.clone(), d);
                }
            }
        }
        MultiMap {
            source: self.source.clone(),
            target: self.target.clone(),
            entries,
        }
    }

    /// Like `map_coeffs` but the closure also sees the key.
    pub fn map_entries<D: Coeff>(&self, mut f: impl FnMut(&Key, &C) -> Option<D>) -> MultiMap<D> {
        let mut entries = BTreeMap::new();
        for (k, c) in &self.entries {
            if let Some(d) = f(k, c) {
                if !d.is_zero() {
                    entries.insert(k.clone(), d);
                }
            }
        }
        MultiMap {
            source: self.source.clone(),
            target: self.target.clone(),
            entries,
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(&Key) -> bool) -> MultiMap<C> {
        self.map_entries(|k, c| keep(k).then(|| c.clone()))
    }

    pub fn truncate(&self, cap: usize) -> MultiMap<C> {
        self.filter(|(w, _)| w.len() <= cap)
    }

    pub fn arity_component(&self, n: usize) -> MultiMap<C> {
        self.filter(|(w, _)| w.len() == n)
    }

    /// Degree of the entry read as a plain map `X^{⊗n} → Y`.
    pub fn plain_degree(&self, ins: &[u8], out: u8) -> i32 {
        self.target.degree(out) - self.source.word_degree(ins)
    }

    /// Degree of the entry read as a map `(sX)^{⊗n} → sY`.
    pub fn suspended_degree(&self, ins: &[u8], out: u8) -> i32 {
        self.target.suspended_degree(out) - self.source.word_suspended_degree(ins)
    }

    /// Splits into pieces of constant suspended degree.
    pub fn by_suspended_degree(&self) -> BTreeMap<i32, MultiMap<C>> {
        let mut parts: BTreeMap<i32, MultiMap<C>> = BTreeMap::new();
        for ((w, o), c) in &self.entries {
            let d = self.suspended_degree(w, *o);
            parts
                .entry(d)
                .or_insert_with(|| MultiMap::zero(self.source.clone(), self.target.clone()))
                .entries
                .insert((w.clone(), *o), c.clone());
        }
        parts
    }

    /// Multiplies every entry by `(-1)^{suspended degree}`.
    pub fn parity_twist(&self) -> MultiMap<C> {
        self.map_entries(|(w, o), c| {
            let d = self.suspended_degree(w, *o);
            Some(if d.rem_euclid(2) == 1 { c.neg() } else { c.clone() })
        })
    }

    /// Multiplies each entry by the sign returned for its key.
    pub fn signed(&self, mut sign: impl FnMut(&[u8], u8) -> bool) -> MultiMap<C> {
        self.map_entries(|(w, o), c| Some(if sign(w, *o) { c.neg() } else { c.clone() }))
    }

    fn by_output(&self) -> HashMap<u8, Vec<(&Vec<u8>, &C, i32)>> {
        let mut idx: HashMap<u8, Vec<(&Vec<u8>, &C, i32)>> = HashMap::new();
        for ((w, o), c) in &self.entries {
            idx.entry(*o)
                .or_default()
                .push((w, c, self.suspended_degree(w, *o)));
        }
        idx
    }
}

/// `Σ_{i} outer(1^{⊗i} ⊗ inner ⊗ 1^{⊗j})` on suspended words, i.e. the
/// corestriction of `outer ∘ inner^`. Moving `inner` past the first `i`
/// suspended factors contributes `(-1)^{|inner| (|sx_1| + ... + |sx_i|)}`.
/// Outputs of arity above `cap` are discarded.
pub fn insert<C: Coeff>(outer: &MultiMap<C>, inner: &MultiMap<C>, cap: usize) -> MultiMap<C> {
    debug_assert_eq!(outer.source, inner.target);
    let mut out = MultiMap::zero(inner.source.clone(), outer.target.clone());
    if outer.is_zero() || inner.is_zero() {
        return out;
    }
    let idx = inner.by_output();
    let src = &inner.source;
    for ((ow, oo), oc) in &outer.entries {
        let mut prefix_degree = 0i32;
        for (p, &slot) in ow.iter().enumerate() {
            if let Some(cands) = idx.get(&slot) {
                for (iw, ic, id) in cands {
                    let arity = ow.len() - 1 + iw.len();
                    if arity > cap {
                        continue;
                    }
                    let mut w = Vec::with_capacity(arity);
                    w.extend_from_slice(&ow[..p]);
                    w.extend_from_slice(iw);
                    w.extend_from_slice(&ow[p + 1..]);
                    let mut c = oc.mul(ic);
                    if (id * prefix_degree).rem_euclid(2) == 1 {
                        c = c.neg();
                    }
                    out.add_term(w, *oo, c);
                }
            }
            prefix_degree += src.suspended_degree(slot);
        }
    }
    out
}

/// `outer(inner_1 ⊗ ... ⊗ inner_m)` summed over all ways of cutting an input
/// word into `m` consecutive nonempty blocks, where only the arity-`m`
/// entries of `outer` are used. Applying `inner_j` after the blocks
/// `w_1 … w_{j-1}` contributes `(-1)^{|inner_j| (|w_1| + ... + |w_{j-1}|)}`.
pub fn plug<C: Coeff>(outer: &MultiMap<C>, inners: &[&MultiMap<C>], cap: usize) -> MultiMap<C> {
    assert!(!inners.is_empty(), "plug needs at least one inner map");
    let src = inners[0].source.clone();
    let mut out = MultiMap::zero(src.clone(), outer.target.clone());
    if outer.is_zero() || inners.iter().any(|m| m.is_zero()) {
        return out;
    }
    let m = inners.len();
    let idxs: Vec<_> = inners.iter().map(|x| x.by_output()).collect();
    for ((ow, oo), oc) in &outer.entries {
        if ow.len() != m {
            continue;
        }
        // depth-first over the choice of inner entry for each slot
        let mut stack: Vec<(usize, Vec<u8>, C, i32)> = vec![(0, Vec::new(), oc.clone(), 0)];
        while let Some((j, word, coeff, prefix)) = stack.pop() {
            if j == m {
                out.add_term(word, *oo, coeff);
                continue;
            }
            let Some(cands) = idxs[j].get(&ow[j]) else {
                continue;
            };
            for (iw, ic, id) in cands {
                if word.len() + iw.len() + (m - j - 1) > cap {
                    continue;
                }
                let mut w = word.clone();
                w.extend_from_slice(iw);
                let mut c = coeff.mul(ic);
                if (id * prefix).rem_euclid(2) == 1 {
                    c = c.neg();
                }
                let block: i32 = src.word_suspended_degree(iw);
                stack.push((j + 1, w, c, prefix + block));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(degs: &[i32]) -> Arc<GradedBasis> {
        Arc::new(GradedBasis::from_degrees(degs).unwrap())
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn zero_terms_are_dropped() {
        let b = basis(&[0]);
        let mut m: MultiMap<Rational> = MultiMap::zero(b.clone(), b);
        m.add_term(vec![0], 0, q(2));
        m.add_term(vec![0], 0, q(-2));
        assert!(m.is_zero());
    }

    #[test]
    fn insert_counts_positions() {
        // outer: arity 2 sending (0,0) to 0; inner: arity 1 identity on e0
        let b = basis(&[0]);
        let mut outer = MultiMap::zero(b.clone(), b.clone());
        outer.add_term(vec![0, 0], 0, q(1));
        let mut inner = MultiMap::zero(b.clone(), b.clone());
        inner.add_term(vec![0], 0, q(1));
        let r = insert(&outer, &inner, 4);
        // inner has suspended degree 0, no signs; two insertion slots
        assert_eq!(r.get(&[0, 0], 0), Some(&q(2)));
    }

    #[test]
    fn insert_sign_from_prefix() {
        // degree-0 basis: suspended factors are odd. An inner map of odd
        // suspended degree picks up a minus sign in the second slot.
        let b = basis(&[0]);
        let mut outer = MultiMap::zero(b.clone(), b.clone());
        outer.add_term(vec![0, 0], 0, q(1));
        let mut inner = MultiMap::zero(b.clone(), b.clone());
        inner.add_term(vec![0, 0], 0, q(1)); // suspended degree 1
        let r = insert(&outer, &inner, 4);
        assert!(r.get(&[0, 0, 0], 0).is_none());
    }

    #[test]
    fn plug_enumerates_block_decompositions() {
        let a = basis(&[0]);
        let b = basis(&[0]);
        let mut beta = MultiMap::zero(b.clone(), b.clone());
        beta.add_term(vec![0, 0], 0, q(1));
        let mut g = MultiMap::zero(a.clone(), b.clone());
        g.add_term(vec![0], 0, q(1));
        g.add_term(vec![0, 0], 0, q(1));
        // beta(g ⊗ g) on words of length 3: decompositions (1,2) and (2,1).
        // In (1,2) the arity-2 piece (odd) passes one odd factor: sign -1.
        // In (2,1) the arity-1 piece is even: sign +1. They cancel.
        let r = plug(&beta, &[&g, &g], 3);
        assert!(r.get(&[0, 0, 0], 0).is_none());
        assert_eq!(r.get(&[0, 0], 0), Some(&q(1)));
        assert!(plug(&beta, &[&g, &g], 2).get(&[0, 0, 0], 0).is_none());
    }
}
