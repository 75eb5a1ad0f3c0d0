//! Maurer–Cartan solving in `g ⊗ m_R` for `R = Q[t]/(t^{N+1})`, obstruction
//! classes, the gauge action of `h ⊗ m_R`, and gauge equivalence.
//!
//! Everything is relative to a fixed morphism `γ`: the differential is the
//! twisted `d^g_1` with `g = encode(γ)`, and an MC solution `g'` represents
//! the deformed triple `g + g'`.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::coeff::{ArtinSeries, Coeff};
use crate::conventions::convention_hash;
use crate::exact_linalg::{kernel_basis, solve, LinalgError, Matrix, QuotientSpace, Rational};
use crate::hochschild::{
    all_words, coalgebra_morphism_apply, coderivation_apply, from_suspended, to_suspended, AlgebraMorphism,
    HochschildError, MorphismFile, WordSum,
};
use crate::linfty::{
    d_corestriction, encode, mc_residual, slice_matrix, twisted_bracket, GElement, HElement, Linfty,
    LinftyError, Part, Slice,
};
use crate::multimap::MultiMap;

#[derive(Debug, Error)]
pub enum DeformationError {
    #[error(transparent)]
    Linfty(#[from] LinftyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error("the solutions deform different morphisms")]
    BaseMismatch,
    #[error("the solutions have different orders ({0} and {1})")]
    OrderMismatch(usize, usize),
    #[error("the first-order element is not a cocycle")]
    NotACocycle,
    #[error("already verified to the series order {0}")]
    OrderExhausted(usize),
    #[error("malformed solution: {0}")]
    Format(String),
}

/// A solution `g'` of the MC equation in `(g ⊗ m_R, d^g)`, known to hold
/// modulo `t^{verified_order + 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MCSolution {
    pub base: AlgebraMorphism,
    pub order: usize,
    pub verified_order: usize,
    pub element: GElement<ArtinSeries>,
}

/// The class in cone cohomology blocking the extension to `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionClass {
    pub order: usize,
    pub class: Vec<Rational>,
    /// The `t^order` coefficient of the residual, a cocycle of g-degree 2.
    pub cocycle: GElement<Rational>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        self.class.iter().all(Rational::is_zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "obstruction": {
                "order": self.order,
                "cone_degree": 3,
                "class": self.class,
            },
            "convention": convention_hash(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extension {
    Extended(MCSolution),
    Obstructed(ObstructionClass),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GaugeOutcome {
    Equivalent(HElement<ArtinSeries>),
    /// The order-by-order system has no solution at `order`. When `exact`
    /// is false, lower-order choices were not unique and a different choice
    /// might still succeed.
    Inequivalent {
        order: usize,
        exact: bool,
    },
}

/// Deformation data attached to one morphism: the L∞-algebra, its base
/// point, and the matrices of `d^g_1` around the MC degree.
pub struct Problem {
    pub gamma: AlgebraMorphism,
    pub space: Linfty,
    pub base: GElement<Rational>,
    pub order: usize,
    gauge_slice: Slice,
    deg1: Slice,
    deg2: Slice,
    gauge_matrix: Matrix,
    d12: Matrix,
}

/// Builds a g-element from plain cochains `(μ', ν', φ')`.
pub fn from_plain<C: Coeff>(mu: &MultiMap<C>, nu: &MultiMap<C>, phi: &MultiMap<C>) -> GElement<C> {
    GElement {
        alpha: to_suspended(mu),
        beta: to_suspended(nu),
        gamma: to_suspended(phi),
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl Problem {
    pub fn new(gamma: &AlgebraMorphism, cap: usize, order: usize) -> Self {
        let space = Linfty::for_morphism(gamma, cap);
        let base = encode(gamma);
        let gauge_slice = Slice::with_parts(&space, 0, &[Part::Alpha, Part::Beta]);
        let deg1 = Slice::new(&space, 1);
        let deg2 = Slice::new(&space, 2);
        let d = |x: &GElement<Rational>| twisted_bracket(&space, &base, &[x]);
        let gauge_matrix = slice_matrix(&space, &gauge_slice, &deg1, d);
        let d12 = slice_matrix(&space, &deg1, &deg2, d);
        Problem {
            gamma: gamma.clone(),
            space,
            base,
            order,
            gauge_slice,
            deg1,
            deg2,
            gauge_matrix,
            d12,
        }
    }

    /// `d^g_1` on rational elements.
    pub fn differential(&self, x: &GElement<Rational>) -> GElement<Rational> {
        twisted_bracket(&self.space, &self.base, &[x])
    }

    fn base_series(&self) -> GElement<ArtinSeries> {
        self.base.to_series(self.order)
    }

    pub fn zero_solution(&self) -> MCSolution {
        MCSolution {
            base: self.gamma.clone(),
            order: self.order,
            verified_order: 0,
            element: self.space.zero(),
        }
    }

    /// `t·x₁` for a cocycle `x₁` of g-degree 1.
    pub fn first_order(&self, x1: &GElement<Rational>) -> Result<MCSolution, DeformationError> {
        if !x1.is_zero() {
            let g = x1.g_degree()?;
            if g != 1 {
                return Err(LinftyError::WrongDegree {
                    expected: 1,
                    found: g,
                }
                .into());
            }
        }
        if !self.differential(x1).is_zero() {
            return Err(DeformationError::NotACocycle);
        }
        Ok(MCSolution {
            base: self.gamma.clone(),
            order: self.order,
            verified_order: self.order.min(1),
            element: x1.truncate(self.space.cap).times_t_power(self.order, 1),
        })
    }

    pub fn residual(&self, el: &GElement<ArtinSeries>) -> Result<GElement<ArtinSeries>, DeformationError> {
        Ok(mc_residual(&self.space, el, &self.base_series())?)
    }

    /// Largest `k ≤ order` with the residual vanishing modulo `t^{k+1}`.
    pub fn verified_order(&self, el: &GElement<ArtinSeries>) -> Result<usize, DeformationError> {
        let r = self.residual(el)?;
        for k in 0..=self.order {
            if !r.coefficient(k).is_zero() {
                return Ok(k.saturating_sub(1));
            }
        }
        Ok(self.order)
    }

    /// One step of the order-by-order solver.
    pub fn extend_order(&self, sol: &MCSolution) -> Result<Extension, DeformationError> {
        let k = sol.verified_order;
        if k >= self.order {
            return Err(DeformationError::OrderExhausted(self.order));
        }
        let lower = sol.element.truncate_order(k);
        let r = self.residual(&lower)?.coefficient(k + 1);
        let rhs: Vec<Rational> = self.deg2.coords(&r).iter().map(|c| -c).collect();
        match solve(&self.d12, &rhs)? {
            Some(x) => {
                let step = self.deg1.element(&self.space, &x);
                let mut element = lower;
                element.add_assign(&step.times_t_power(self.order, k + 1));
                Ok(Extension::Extended(MCSolution {
                    base: sol.base.clone(),
                    order: self.order,
                    verified_order: k + 1,
                    element,
                }))
            }
            None => {
                let class = self.obstruction_space()?.class_of(&self.deg2.coords(&r))?;
                Ok(Extension::Obstructed(ObstructionClass {
                    order: k + 1,
                    class,
                    cocycle: r,
                }))
            }
        }
    }

    /// Cohomology of `d^g_1` at g-degree 2, where obstructions live.
    pub fn obstruction_space(&self) -> Result<QuotientSpace, DeformationError> {
        let deg3 = Slice::new(&self.space, 3);
        let d23 = slice_matrix(&self.space, &self.deg2, &deg3, |x| self.differential(x));
        Ok(QuotientSpace::new(&d23, &self.d12)?)
    }

    /// Coordinates of a g-degree 2 cocycle in [`Problem::obstruction_space`].
    pub fn obstruction_coords(&self, x: &GElement<Rational>) -> Result<Vec<Rational>, DeformationError> {
        Ok(self.obstruction_space()?.class_of(&self.deg2.coords(x))?)
    }

    /// Extends until `target` or the first obstruction.
    pub fn solve_to(&self, sol: &MCSolution, target: usize) -> Result<Extension, DeformationError> {
        let mut cur = sol.clone();
        while cur.verified_order < target.min(self.order) {
            match self.extend_order(&cur)? {
                Extension::Extended(next) => cur = next,
                obstructed => return Ok(obstructed),
            }
        }
        Ok(Extension::Extended(cur))
    }

    fn check_gauge(&self, h: &HElement<ArtinSeries>) -> Result<GElement<ArtinSeries>, DeformationError> {
        let hg = h.to_g(&self.space);
        if hg.is_zero() {
            return Ok(hg);
        }
        let g = hg.g_degree()?;
        if g != 0 {
            return Err(LinftyError::WrongDegree {
                expected: 0,
                found: g,
            }
            .into());
        }
        if !hg.in_maximal_ideal() {
            return Err(LinftyError::NotInMaximalIdeal.into());
        }
        Ok(hg)
    }

    /// `ad_h g' = d^{g+g'}_1(sh)`.
    pub fn ad_h(
        &self,
        h: &HElement<ArtinSeries>,
        g_prime: &GElement<ArtinSeries>,
    ) -> Result<GElement<ArtinSeries>, DeformationError> {
        let hg = self.check_gauge(h)?;
        let x = self.base_series().plus(g_prime);
        Ok(twisted_bracket(&self.space, &x, &[&hg]))
    }

    /// The gauge action on `g'`: the time-one flow of `X ↦ d^X_1(sh)`
    /// starting at `X = g + g'`, expanded as a power series in the flow
    /// time. Terminates because every step gains a factor of `t`.
    pub fn gauge_action(
        &self,
        h: &HElement<ArtinSeries>,
        g_prime: &GElement<ArtinSeries>,
    ) -> Result<GElement<ArtinSeries>, DeformationError> {
        let hg = self.check_gauge(h)?;
        let l = &self.space;
        let mut cs = vec![self.base_series().plus(g_prime)];
        if !hg.is_zero() {
            for k in 0..self.order {
                let mut v = l.zero();
                for n in 0..=l.cap {
                    for comp in compositions(k, n) {
                        if comp.iter().any(|&j| cs[j].is_zero()) {
                            continue;
                        }
                        for pos in 0..=n {
                            let mut word: Vec<&GElement<ArtinSeries>> =
                                comp.iter().map(|&j| &cs[j]).collect();
                            word.insert(pos, &hg);
                            v.add_assign(&d_corestriction(l, &word));
                        }
                    }
                }
                cs.push(v.scale(&Rational::new(1, k as i64 + 1)));
            }
        }
        let mut total = l.zero();
        for c in &cs {
            total.add_assign(c);
        }
        Ok(total.minus(&self.base_series()))
    }

    pub fn gauge_exp(
        &self,
        h: &HElement<ArtinSeries>,
        sol: &MCSolution,
    ) -> Result<MCSolution, DeformationError> {
        Ok(MCSolution {
            element: self.gauge_action(h, &sol.element)?,
            ..sol.clone()
        })
    }

    /// Order-by-order search for `h` with `gauge_exp(h, s1) = s2`.
    pub fn gauge_equivalent(
        &self,
        s1: &MCSolution,
        s2: &MCSolution,
    ) -> Result<GaugeOutcome, DeformationError> {
        if s1.base != s2.base || s1.base != self.gamma {
            return Err(DeformationError::BaseMismatch);
        }
        if s1.order != s2.order || s1.order != self.order {
            return Err(DeformationError::OrderMismatch(s1.order, s2.order));
        }
        let unique = self.gauge_matrix.rank() == self.gauge_slice.dim();
        let mut h = HElement {
            alpha: MultiMap::zero(self.space.a.clone(), self.space.a.clone()),
            beta: MultiMap::zero(self.space.b.clone(), self.space.b.clone()),
        };
        for k in 1..=self.order {
            let cur = self.gauge_action(&h, &s1.element)?;
            let diff = s2.element.minus(&cur).coefficient(k);
            if diff.is_zero() {
                continue;
            }
            if !self.deg1.contains(&diff) {
                return Ok(GaugeOutcome::Inequivalent {
                    order: k,
                    exact: true,
                });
            }
            match solve(&self.gauge_matrix, &self.deg1.coords(&diff))? {
                Some(x) => {
                    let step = self.gauge_slice.element(&self.space, &x);
                    let step = HElement::from_g(&step.times_t_power(self.order, k));
                    h.alpha.add_assign(&step.alpha);
                    h.beta.add_assign(&step.beta);
                }
                None => {
                    return Ok(GaugeOutcome::Inequivalent {
                        order: k,
                        exact: unique || k == 1,
                    })
                }
            }
        }
        Ok(GaugeOutcome::Equivalent(h))
    }

    /// A basis of the first-order cocycles `ker d^g_1` at g-degree 1.
    pub fn first_order_cocycles(&self) -> Vec<GElement<Rational>> {
        kernel_basis(&self.d12)
            .iter()
            .map(|v| self.deg1.element(&self.space, v))
            .collect()
    }

    /// First-order MC solutions modulo first-order gauge transformations.
    pub fn tangent_dimension(&self) -> usize {
        self.deg1.dim() - self.d12.rank() - self.gauge_matrix.rank()
    }

    /// The MC-relevant slices, for callers building elements.
    pub fn degree_one(&self) -> &Slice {
        &self.deg1
    }

    pub fn gauge_slice(&self) -> &Slice {
        &self.gauge_slice
    }
}

fn exp_apply(f: &MultiMap<ArtinSeries>, ws: &WordSum<ArtinSeries>, negate: bool) -> WordSum<ArtinSeries> {
    let mut acc = ws.clone();
    let mut term = ws.clone();
    for k in 1.. {
        term = coderivation_apply(f, &term).scale(&Rational::new(1, k));
        if negate {
            term = term.neg();
        }
        if term.is_zero() {
            break;
        }
        acc.add_assign(&term);
    }
    acc
}

/// Independent computation of the gauge action by conjugating the lifts:
/// the corestrictions of `e^{ĥ_A} α̂ e^{-ĥ_A}`, `e^{ĥ_B} β̂ e^{-ĥ_B}` and
/// `e^{ĥ_B} γ~ e^{-ĥ_A}`, applied to every word of length at most the cap.
/// Takes and returns the total element `g + g'`.
pub fn conjugation_oracle(
    l: &Linfty,
    total: &GElement<ArtinSeries>,
    h: &HElement<ArtinSeries>,
    order: usize,
) -> GElement<ArtinSeries> {
    let unit = ArtinSeries::constant(order, Rational::one());
    let mut out = l.zero();
    let conj = |f: &MultiMap<ArtinSeries>, hf: &MultiMap<ArtinSeries>| {
        let basis = f.source().clone();
        let mut r = MultiMap::zero(basis.clone(), basis.clone());
        for w in all_words(&basis, l.cap) {
            let ws = WordSum::single(basis.clone(), w.clone(), unit.clone());
            let y = exp_apply(hf, &ws, true);
            let z = coderivation_apply(f, &y);
            for (o, c) in exp_apply(hf, &z, false).corestrict() {
                r.add_term(w.clone(), o, c);
            }
        }
        r
    };
    out.alpha = conj(&total.alpha, &h.alpha);
    out.beta = conj(&total.beta, &h.beta);
    for w in all_words(&l.a, l.cap) {
        let ws = WordSum::single(l.a.clone(), w.clone(), unit.clone());
        let y = exp_apply(&h.alpha, &ws, true);
        let z = coalgebra_morphism_apply(&total.gamma, &y, None);
        for (o, c) in exp_apply(&h.beta, &z, false).corestrict() {
            out.gamma.add_term(w.clone(), o, c);
        }
    }
    out
}

fn tensor_json(m: &MultiMap<ArtinSeries>, arity: usize, order: usize) -> Value {
    fn build(m: &MultiMap<ArtinSeries>, prefix: &mut Vec<u8>, arity: usize, order: usize) -> Value {
        if prefix.len() == arity {
            let outs: Vec<Value> = (0..m.target().dim() as u8)
                .map(|o| {
                    let c = m
                        .get(prefix, o)
                        .cloned()
                        .unwrap_or_else(|| ArtinSeries::zero(order));
                    serde_json::to_value(c).expect("series serialize")
                })
                .collect();
            return Value::Array(outs);
        }
        let mut items = Vec::new();
        for i in 0..m.source().dim() as u8 {
            prefix.push(i);
            items.push(build(m, prefix, arity, order));
            prefix.pop();
        }
        Value::Array(items)
    }
    build(m, &mut Vec::new(), arity, order)
}

/// Plain cochain as `{arity: dense nested tensor}`; only arities with a
/// nonzero entry are listed. The innermost index is the output.
fn tensors_json(m: &MultiMap<ArtinSeries>, order: usize) -> Value {
    let arities: std::collections::BTreeSet<usize> = m.entries().keys().map(|(w, _)| w.len()).collect();
    let map: BTreeMap<String, Value> = arities
        .into_iter()
        .map(|n| (n.to_string(), tensor_json(m, n, order)))
        .collect();
    serde_json::to_value(map).expect("tensor map")
}

fn parse_tensors<C: Coeff + serde::de::DeserializeOwned>(
    v: &Value,
    into: &mut MultiMap<C>,
) -> Result<(), DeformationError> {
    let bad = |s: &str| DeformationError::Format(s.to_string());
    if v.is_null() {
        return Ok(());
    }
    let obj = v.as_object().ok_or_else(|| bad("tensor map must be an object"))?;
    for (key, tensor) in obj {
        let arity: usize = key.parse().map_err(|_| bad("arity keys must be integers"))?;
        let mut stack = vec![(Vec::<u8>::new(), tensor)];
        while let Some((prefix, t)) = stack.pop() {
            let items = t.as_array().ok_or_else(|| bad("tensor levels must be arrays"))?;
            if prefix.len() == arity {
                if items.len() != into.target().dim() {
                    return Err(bad("output level has the wrong length"));
                }
                for (o, item) in items.iter().enumerate() {
                    let c: C = serde_json::from_value(item.clone()).map_err(|e| bad(&e.to_string()))?;
                    into.add_term(prefix.clone(), o as u8, c);
                }
            } else {
                if items.len() != into.source().dim() {
                    return Err(bad("input level has the wrong length"));
                }
                for (i, item) in items.iter().enumerate() {
                    let mut p = prefix.clone();
                    p.push(i as u8);
                    stack.push((p, item));
                }
            }
        }
    }
    Ok(())
}

impl MCSolution {
    /// The deformation `(μ', ν', φ')` as plain cochains.
    pub fn to_json(&self) -> Value {
        json!({
            "convention": convention_hash(),
            "order": self.order,
            "verified_order": self.verified_order,
            "base": self.base.to_file(),
            "alpha": tensors_json(&from_suspended(&self.element.alpha), self.order),
            "beta": tensors_json(&from_suspended(&self.element.beta), self.order),
            "phi": tensors_json(&from_suspended(&self.element.gamma), self.order),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, DeformationError> {
        let bad = |s: &str| DeformationError::Format(s.to_string());
        let order = v["order"].as_u64().ok_or_else(|| bad("missing order"))? as usize;
        let verified_order = v["verified_order"]
            .as_u64()
            .ok_or_else(|| bad("missing verified_order"))? as usize;
        let file: MorphismFile =
            serde_json::from_value(v["base"].clone()).map_err(|e| bad(&e.to_string()))?;
        let base = AlgebraMorphism::from_file(file)?;
        let l = Linfty::for_morphism(&base, 0);
        let mut plain: GElement<ArtinSeries> = l.zero();
        for (key, part) in [("alpha", Part::Alpha), ("beta", Part::Beta), ("phi", Part::Gamma)] {
            parse_tensors(&v[key], plain.part_mut(part))?;
        }
        let element = from_plain(&plain.alpha, &plain.beta, &plain.gamma);
        if !element.in_maximal_ideal() {
            return Err(LinftyError::NotInMaximalIdeal.into());
        }
        Ok(MCSolution {
            base,
            order,
            verified_order,
            element,
        })
    }
}

/// A first-order cochain `(μ₁, ν₁, φ₁)` given as plain rational tensors
/// under the keys `alpha`, `beta`, `phi` (missing keys are zero).
pub fn cochain_from_json(v: &Value, base: &AlgebraMorphism) -> Result<GElement<Rational>, DeformationError> {
    let l = Linfty::for_morphism(base, 0);
    let mut plain: GElement<Rational> = l.zero();
    for (key, part) in [("alpha", Part::Alpha), ("beta", Part::Beta), ("phi", Part::Gamma)] {
        parse_tensors(&v[key], plain.part_mut(part))?;
    }
    Ok(from_plain(&plain.alpha, &plain.beta, &plain.gamma))
}

/// A gauge witness as plain cochains `(h_A, h_B)`.
pub fn gauge_to_json(h: &HElement<ArtinSeries>, order: usize) -> Value {
    json!({
        "alpha": tensors_json(&from_suspended(&h.alpha), order),
        "beta": tensors_json(&from_suspended(&h.beta), order),
    })
}
