//! The L∞-algebra `g = Hom(T(sA),sA) ⊕ Hom(T(sB),sB) ⊕ s⁻¹Hom(T(sA),sB)`.
//!
//! An element `α + β + s⁻¹γ` is stored through its three suspended maps.
//! For an entry of suspended map degree `D`, the `g`-degree is `D` on the
//! `α` and `β` parts and `D + 1` on the `γ` part; in `sg` every part has
//! degree `g-degree - 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::{ArtinSeries, Coeff};
use crate::exact_linalg::{Matrix, Rational};
use crate::graded_signs::{shuffles, symmetrize, GradedBasis};
use crate::hochschild::{ainfty_residuals, from_suspended, to_suspended, AlgebraMorphism, DGAlgebra};
use crate::multimap::{insert, plug, MultiMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinftyError {
    #[error("element is not homogeneous (g-degrees {0:?})")]
    NotHomogeneous(Vec<i32>),
    #[error("expected g-degree {expected}, found {found}")]
    WrongDegree { expected: i32, found: i32 },
    #[error("coefficients must lie in the maximal ideal (t)")]
    NotInMaximalIdeal,
}

/// The three summands of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Alpha,
    Beta,
    Gamma,
}

impl Part {
    pub fn letter(self) -> char {
        match self {
            Part::Alpha => 'a',
            Part::Beta => 'b',
            Part::Gamma => 'g',
        }
    }
}

/// Underlying graded spaces and the arity cap.
#[derive(Clone, Debug, PartialEq)]
pub struct Linfty {
    pub a: Arc<GradedBasis>,
    pub b: Arc<GradedBasis>,
    pub cap: usize,
}

impl Linfty {
    pub fn new(a: Arc<GradedBasis>, b: Arc<GradedBasis>, cap: usize) -> Self {
        Linfty { a, b, cap }
    }

    pub fn for_morphism(gamma: &AlgebraMorphism, cap: usize) -> Self {
        Linfty::new(
            gamma.source().basis().clone(),
            gamma.target().basis().clone(),
            cap,
        )
    }

    pub fn zero<C: Coeff>(&self) -> GElement<C> {
        GElement {
            alpha: MultiMap::zero(self.a.clone(), self.a.clone()),
            beta: MultiMap::zero(self.b.clone(), self.b.clone()),
            gamma: MultiMap::zero(self.a.clone(), self.b.clone()),
        }
    }

    fn bases(&self, part: Part) -> (&Arc<GradedBasis>, &Arc<GradedBasis>) {
        match part {
            Part::Alpha => (&self.a, &self.a),
            Part::Beta => (&self.b, &self.b),
            Part::Gamma => (&self.a, &self.b),
        }
    }
}

/// Element of `g` (or `g ⊗ R`), as suspended maps.
#[derive(Clone, Debug, PartialEq)]
pub struct GElement<C> {
    pub alpha: MultiMap<C>,
    pub beta: MultiMap<C>,
    pub gamma: MultiMap<C>,
}

impl<C: Coeff> GElement<C> {
    pub fn part(&self, p: Part) -> &MultiMap<C> {
        match p {
            Part::Alpha => &self.alpha,
            Part::Beta => &self.beta,
            Part::Gamma => &self.gamma,
        }
    }

    pub fn part_mut(&mut self, p: Part) -> &mut MultiMap<C> {
        match p {
            Part::Alpha => &mut self.alpha,
            Part::Beta => &mut self.beta,
            Part::Gamma => &mut self.gamma,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    fn zip(&self, other: &Self, f: impl Fn(&MultiMap<C>, &MultiMap<C>) -> MultiMap<C>) -> Self {
        GElement {
            alpha: f(&self.alpha, &other.alpha),
            beta: f(&self.beta, &other.beta),
            gamma: f(&self.gamma, &other.gamma),
        }
    }

    fn each(&self, f: impl Fn(&MultiMap<C>) -> MultiMap<C>) -> Self {
        GElement {
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: f(&self.gamma),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.zip(other, MultiMap::plus)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip(other, MultiMap::minus)
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.alpha.add_assign(&other.alpha);
        self.beta.add_assign(&other.beta);
        self.gamma.add_assign(&other.gamma);
    }

    pub fn neg(&self) -> Self {
        self.each(MultiMap::neg)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.each(|m| m.scale(r))
    }

    pub fn mul_coeff(&self, k: &C) -> Self {
        self.each(|m| m.mul_coeff(k))
    }

    pub fn truncate(&self, cap: usize) -> Self {
        self.each(|m| m.truncate(cap))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Option<D>) -> GElement<D> {
        GElement {
            alpha: self.alpha.map_coeffs(&f),
            beta: self.beta.map_coeffs(&f),
            gamma: self.gamma.map_coeffs(&f),
        }
    }

    /// g-degree of one entry of the given part.
    pub fn entry_g_degree(&self, part: Part, ins: &[u8], out: u8) -> i32 {
        let d = self.part(part).suspended_degree(ins, out);
        if part == Part::Gamma {
            d + 1
        } else {
            d
        }
    }

    /// All g-degrees occurring in the element.
    pub fn g_degrees(&self) -> BTreeSet<i32> {
        let mut s = BTreeSet::new();
        for p in [Part::Alpha, Part::Beta, Part::Gamma] {
            for (w, o) in self.part(p).entries().keys() {
                s.insert(self.entry_g_degree(p, w, *o));
            }
        }
        s
    }

    /// The common g-degree of a nonzero homogeneous element.
    pub fn g_degree(&self) -> Result<i32, LinftyError> {
        let degs = self.g_degrees();
        if degs.len() == 1 {
            Ok(*degs.iter().next().unwrap())
        } else {
            Err(LinftyError::NotHomogeneous(degs.into_iter().collect()))
        }
    }

    /// Splits into homogeneous components, keyed by g-degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<i32, GElement<C>> {
        let mut out: BTreeMap<i32, GElement<C>> = BTreeMap::new();
        for p in [Part::Alpha, Part::Beta, Part::Gamma] {
            let shift = if p == Part::Gamma { 1 } else { 0 };
            for (d, piece) in self.part(p).by_suspended_degree() {
                let slot = out.entry(d + shift).or_insert_with(|| GElement {
                    alpha: MultiMap::zero(self.alpha.source().clone(), self.alpha.target().clone()),
                    beta: MultiMap::zero(self.beta.source().clone(), self.beta.target().clone()),
                    gamma: MultiMap::zero(self.gamma.source().clone(), self.gamma.target().clone()),
                });
                *slot.part_mut(p) = piece;
            }
        }
        out
    }

    pub fn restrict_to_degree(&self, g: i32) -> GElement<C> {
        let mut z = self.each(|m| MultiMap::zero(m.source().clone(), m.target().clone()));
        if let Some(p) = self.homogeneous_parts().remove(&g) {
            z = p;
        }
        z
    }

    /// Drops the `γ` part: the projection onto `h`.
    pub fn project_h(&self) -> GElement<C> {
        GElement {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: MultiMap::zero(self.gamma.source().clone(), self.gamma.target().clone()),
        }
    }

    pub fn max_arity(&self) -> usize {
        self.alpha
            .max_arity()
            .max(self.beta.max_arity())
            .max(self.gamma.max_arity())
    }
}

impl GElement<Rational> {
    /// Constant embedding into `g ⊗ Q[t]/(t^{order+1})`.
    pub fn to_series(&self, order: usize) -> GElement<ArtinSeries> {
        self.map_coeffs(|r| Some(ArtinSeries::constant(order, r.clone())))
    }

    /// `t^power` times the element.
    pub fn times_t_power(&self, order: usize, power: usize) -> GElement<ArtinSeries> {
        self.map_coeffs(|r| Some(ArtinSeries::monomial(order, power, r.clone())))
    }
}

impl GElement<ArtinSeries> {
    /// Coefficient of `t^power`.
    pub fn coefficient(&self, power: usize) -> GElement<Rational> {
        self.map_coeffs(|s| Some(s.coeff(power)))
    }

    pub fn in_maximal_ideal(&self) -> bool {
        [&self.alpha, &self.beta, &self.gamma]
            .iter()
            .all(|m| m.entries().values().all(ArtinSeries::in_maximal_ideal))
    }

    pub fn truncate_order(&self, k: usize) -> GElement<ArtinSeries> {
        self.map_coeffs(|s| Some(s.truncate_above(k)))
    }
}

/// Element of the gauge subalgebra `h`: no `γ` part.
#[derive(Clone, Debug, PartialEq)]
pub struct HElement<C> {
    pub alpha: MultiMap<C>,
    pub beta: MultiMap<C>,
}

impl<C: Coeff> HElement<C> {
    pub fn to_g(&self, l: &Linfty) -> GElement<C> {
        GElement {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: MultiMap::zero(l.a.clone(), l.b.clone()),
        }
    }

    pub fn from_g(g: &GElement<C>) -> Self {
        HElement {
            alpha: g.alpha.clone(),
            beta: g.beta.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    pub fn neg(&self) -> Self {
        HElement {
            alpha: self.alpha.neg(),
            beta: self.beta.neg(),
        }
    }
}

/// The corestriction `d = χ_A + χ_B + λ + Σ ρ_m` on a word of `T(sg)`.
///
/// * length 2: `χ_A(sα₁⊗sα₂) = (-1)^{α₁} s(α₁∘α₂^)`, likewise `χ_B`,
///   `λ(γ⊗sα) = -(-1)^{γ} γ∘α^`, and `ρ_1(sβ⊗γ) = β(γ)`;
/// * length `m+1 ≥ 3`: `ρ_m(sβ⊗γ₁⊗…⊗γ_m) = β(γ₁⊗…⊗γ_m)`;
/// * zero on every other shape, including all words of length 1.
///
/// Each factor is a full element of `g`, so the shape is selected by taking
/// the relevant part of every factor.
pub fn d_corestriction<C: Coeff>(l: &Linfty, word: &[&GElement<C>]) -> GElement<C> {
    let mut out = l.zero();
    let cap = l.cap;
    match word.len() {
        0 | 1 => {}
        2 => {
            let (x, y) = (word[0], word[1]);
            out.alpha = insert(&x.alpha.parity_twist(), &y.alpha, cap);
            out.beta = insert(&x.beta.parity_twist(), &y.beta, cap);
            let lambda = insert(&x.gamma.parity_twist(), &y.alpha, cap).neg();
            let rho = plug(&x.beta, &[&y.gamma], cap);
            out.gamma = lambda.plus(&rho);
        }
        m1 => {
            let gammas: Vec<&MultiMap<C>> = word[1..].iter().map(|w| &w.gamma).collect();
            if m1 - 1 <= cap {
                out.gamma = plug(&word[0].beta, &gammas, cap);
            }
        }
    }
    out
}

/// A family of brackets `T(sg) → sg`.
pub trait Brackets<C: Coeff>: Sync {
    fn space(&self) -> &Linfty;
    /// Corestriction on a word of arbitrary length.
    fn bracket(&self, word: &[&GElement<C>]) -> GElement<C>;
    /// Longest word on which the bracket can be nonzero.
    fn max_length(&self) -> usize {
        self.space().cap + 1
    }
}

/// The untwisted brackets `d`.
pub struct Untwisted<'a> {
    pub space: &'a Linfty,
}

impl<C: Coeff> Brackets<C> for Untwisted<'_> {
    fn space(&self) -> &Linfty {
        self.space
    }
    fn bracket(&self, word: &[&GElement<C>]) -> GElement<C> {
        d_corestriction(self.space, word)
    }
}

/// Brackets twisted by an even element `x`:
/// `d^x_n(y_1..y_n) = Σ_m d_{m+n}(Sh((sx)^{⊗m}, y_1..y_n))`.
pub struct Twisted<'a, C> {
    pub space: &'a Linfty,
    pub base: GElement<C>,
}

impl<'a, C: Coeff> Twisted<'a, C> {
    pub fn new(space: &'a Linfty, base: GElement<C>) -> Result<Self, LinftyError> {
        if !base.is_zero() {
            let g = base.g_degree()?;
            if g != 1 {
                return Err(LinftyError::WrongDegree {
                    expected: 1,
                    found: g,
                });
            }
        }
        Ok(Twisted { space, base })
    }
}

impl<C: Coeff> Brackets<C> for Twisted<'_, C> {
    fn space(&self) -> &Linfty {
        self.space
    }

    fn bracket(&self, word: &[&GElement<C>]) -> GElement<C> {
        twisted_bracket(self.space, &self.base, word)
    }
}

/// `Σ_m Σ_{shuffles} d_{m+n}` with the base element inserted; no signs
/// since the base is even in `sg`.
pub fn twisted_bracket<C: Coeff>(l: &Linfty, base: &GElement<C>, word: &[&GElement<C>]) -> GElement<C> {
    let n = word.len();
    let mut out = l.zero();
    if base.is_zero() {
        return d_corestriction(l, word);
    }
    for m in 0..=(l.cap + 1).saturating_sub(n) {
        for pattern in shuffles(m, n) {
            let mut it = word.iter();
            let full: Vec<&GElement<C>> = pattern
                .iter()
                .map(|&is_base| if is_base { base } else { *it.next().unwrap() })
                .collect();
            out.add_assign(&d_corestriction(l, &full));
        }
    }
    out
}

/// The L∞ bracket `ℓ^base_n(x_1, …, x_n)`: the twisted bracket on the
/// symmetrization `x_1 ⊙ … ⊙ x_n`, Koszul signs on sg-degrees. Factors must
/// be homogeneous.
pub fn symmetric_bracket<C: Coeff>(
    l: &Linfty,
    base: &GElement<C>,
    word: &[&GElement<C>],
) -> Result<GElement<C>, LinftyError> {
    let mut out = l.zero();
    if word.iter().any(|x| x.is_zero()) {
        return Ok(out);
    }
    let degs = word
        .iter()
        .map(|x| x.g_degree().map(|g| g - 1))
        .collect::<Result<Vec<i32>, _>>()?;
    for (perm, sign) in symmetrize(&degs) {
        let permuted: Vec<&GElement<C>> = perm.iter().map(|&i| word[i]).collect();
        let r = twisted_bracket(l, base, &permuted);
        if sign.is_minus() {
            out.add_assign(&r.neg());
        } else {
            out.add_assign(&r);
        }
    }
    Ok(out)
}

/// Expands a word of possibly inhomogeneous factors into a sum of words of
/// homogeneous factors.
pub fn expand_homogeneous<C: Coeff>(word: &[GElement<C>]) -> Vec<Vec<GElement<C>>> {
    let mut acc: Vec<Vec<GElement<C>>> = vec![Vec::new()];
    for f in word {
        let parts: Vec<GElement<C>> = f.homogeneous_parts().into_values().collect();
        let mut next = Vec::new();
        for w in &acc {
            for p in &parts {
                let mut nw = w.clone();
                nw.push(p.clone());
                next.push(nw);
            }
        }
        acc = next;
    }
    acc
}

fn sg_degree<C: Coeff>(x: &GElement<C>) -> i32 {
    x.g_degree().expect("homogeneous factor") - 1
}

/// Corestriction of `d^ ∘ d^` on a word of homogeneous factors:
/// `Σ_{i ≤ j} (-1)^{|w_1|+…+|w_{i-1}|} d(w_1.., d(w_i..w_j), ..w_n)`,
/// degrees taken in `sg`.
pub fn dhat_squared<C: Coeff, B: Brackets<C>>(br: &B, word: &[GElement<C>]) -> GElement<C> {
    let l = br.space();
    let n = word.len();
    let mut out = l.zero();
    let degs: Vec<i32> = word.iter().map(sg_degree).collect();
    let mut prefix = 0i32;
    for i in 0..n {
        for j in i..n {
            if j - i + 1 > br.max_length() {
                break;
            }
            let inner_word: Vec<&GElement<C>> = word[i..=j].iter().collect();
            let inner = br.bracket(&inner_word);
            if inner.is_zero() {
                continue;
            }
            let mut outer_word: Vec<&GElement<C>> = word[..i].iter().collect();
            outer_word.push(&inner);
            outer_word.extend(word[j + 1..].iter());
            if outer_word.len() > br.max_length() {
                continue;
            }
            let r = br.bracket(&outer_word);
            if prefix.rem_euclid(2) == 1 {
                out.add_assign(&r.neg());
            } else {
                out.add_assign(&r);
            }
        }
        prefix += degs[i];
    }
    out
}

/// `d^ ∘ d^` applied to the symmetrization of the word in `S(sg)`, with
/// Koszul signs on `sg`-degrees. Inhomogeneous factors are expanded first.
pub fn dhat_squared_on_symmetrization<C: Coeff, B: Brackets<C>>(br: &B, word: &[GElement<C>]) -> GElement<C> {
    let mut out = br.space().zero();
    for hw in expand_homogeneous(word) {
        if hw.iter().any(GElement::is_zero) {
            continue;
        }
        let degs: Vec<i32> = hw.iter().map(sg_degree).collect();
        for (perm, sign) in symmetrize(&degs) {
            let permuted: Vec<GElement<C>> = perm.iter().map(|&i| hw[i].clone()).collect();
            let r = dhat_squared(br, &permuted);
            if sign.is_minus() {
                out.add_assign(&r.neg());
            } else {
                out.add_assign(&r);
            }
        }
    }
    out
}

/// The element of `g` representing `γ: A → B` together with the algebra
/// structures: `α = s(δ_A + μ_A)`, `β = s(δ_B + μ_B)`, `γ = sγ`.
pub fn encode(gamma: &AlgebraMorphism) -> GElement<Rational> {
    GElement {
        alpha: to_suspended(&gamma.source().structure()),
        beta: to_suspended(&gamma.target().structure()),
        gamma: to_suspended(&gamma.as_cochain()),
    }
}

/// `x₀ = sδ_A + sδ_B`: twisting by it gives the L∞-algebra of the dg pair.
pub fn differential_element(a: &DGAlgebra, b: &DGAlgebra) -> GElement<Rational> {
    GElement {
        alpha: to_suspended(&a.delta()),
        beta: to_suspended(&b.delta()),
        gamma: MultiMap::zero(a.basis().clone(), b.basis().clone()),
    }
}

/// `Σ_{m ≥ 1} d_m((sx)^{⊗m})` for the untwisted brackets.
pub fn mc_full<C: Coeff>(l: &Linfty, x: &GElement<C>) -> GElement<C> {
    let mut out = l.zero();
    for m in 2..=l.cap + 1 {
        let word: Vec<&GElement<C>> = vec![x; m];
        out.add_assign(&d_corestriction(l, &word));
    }
    out
}

/// Left side of the MC equation in `(g ⊗ m_R, d^base)`:
/// `Σ_{n ≥ 1} d^base_n((s el)^{⊗n})`. The element must have g-degree 1.
pub fn mc_residual<C: Coeff>(
    l: &Linfty,
    el: &GElement<C>,
    base: &GElement<C>,
) -> Result<GElement<C>, LinftyError> {
    if el.is_zero() {
        return Ok(l.zero());
    }
    let g = el.g_degree()?;
    if g != 1 {
        return Err(LinftyError::WrongDegree {
            expected: 1,
            found: g,
        });
    }
    let mut out = l.zero();
    for n in 1..=l.cap + 1 {
        let word: Vec<&GElement<C>> = vec![el; n];
        out.add_assign(&twisted_bracket(l, base, &word));
    }
    Ok(out)
}

/// The plain A∞ triple `(μ, ν, φ)` represented by `base + el`.
pub fn decode<C: Coeff>(total: &GElement<C>) -> [MultiMap<C>; 3] {
    [
        from_suspended(&total.alpha),
        from_suspended(&total.beta),
        from_suspended(&total.gamma),
    ]
}

/// A∞ residuals of the decoded triple of `total`, transported back to `g`
/// and negated so that they equal `mc_full(total)` entrywise.
pub fn residuals_as_g<C: Coeff>(l: &Linfty, total: &GElement<C>) -> GElement<C> {
    let [mu, nu, phi] = decode(total);
    let [r1, r2, r3] = ainfty_residuals(&mu, &nu, &phi, l.cap);
    GElement {
        alpha: to_suspended(&r1).neg(),
        beta: to_suspended(&r2).neg(),
        gamma: to_suspended(&r3).neg(),
    }
}

/// A basis of one g-degree slice: every entry `(part, inputs, output)`
/// of that g-degree with arity at most `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub g_degree: i32,
    pub keys: Vec<(Part, Vec<u8>, u8)>,
    index: BTreeMap<(Part, Vec<u8>, u8), usize>,
}

impl Slice {
    pub fn new(l: &Linfty, g_degree: i32) -> Self {
        Self::with_parts(l, g_degree, &[Part::Alpha, Part::Beta, Part::Gamma])
    }

    pub fn with_parts(l: &Linfty, g_degree: i32, parts: &[Part]) -> Self {
        let mut keys = Vec::new();
        for &p in parts {
            let (src, tgt) = l.bases(p);
            let d = if p == Part::Gamma { g_degree - 1 } else { g_degree };
            for w in crate::hochschild::all_words(src, l.cap) {
                let sw = src.word_suspended_degree(&w);
                for o in 0..tgt.dim() as u8 {
                    if tgt.suspended_degree(o) - sw == d {
                        keys.push((p, w.clone(), o));
                    }
                }
            }
        }
        keys.sort();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Slice {
            g_degree,
            keys,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn unit(&self, l: &Linfty, i: usize) -> GElement<Rational> {
        let mut g = l.zero();
        let (p, w, o) = &self.keys[i];
        g.part_mut(*p).add_term(w.clone(), *o, Rational::one());
        g
    }

    pub fn element<C: Coeff>(&self, l: &Linfty, coords: &[C]) -> GElement<C> {
        let mut g = l.zero();
        for ((p, w, o), c) in self.keys.iter().zip(coords) {
            g.part_mut(*p).add_term(w.clone(), *o, c.clone());
        }
        g
    }

    /// Coordinates of the part of `x` lying in this slice; entries outside
    /// the slice are ignored.
    pub fn coords(&self, x: &GElement<Rational>) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        for p in [Part::Alpha, Part::Beta, Part::Gamma] {
            for ((w, o), c) in x.part(p).entries() {
                if let Some(&i) = self.index.get(&(p, w.clone(), *o)) {
                    v[i] = c.clone();
                }
            }
        }
        v
    }

    /// Whether every entry of `x` lies in this slice.
    pub fn contains(&self, x: &GElement<Rational>) -> bool {
        [Part::Alpha, Part::Beta, Part::Gamma].iter().all(|&p| {
            x.part(p)
                .entries()
                .keys()
                .all(|(w, o)| self.index.contains_key(&(p, w.clone(), *o)))
        })
    }
}

/// Matrix of a linear map `g → g` restricted to `from` and projected onto
/// `to`. Columns are computed in parallel.
pub fn slice_matrix(
    l: &Linfty,
    from: &Slice,
    to: &Slice,
    f: impl Fn(&GElement<Rational>) -> GElement<Rational> + Sync,
) -> Matrix {
    use rayon::prelude::*;
    let columns: Vec<Vec<Rational>> = (0..from.dim())
        .into_par_iter()
        .map(|i| to.coords(&f(&from.unit(l, i))))
        .collect();
    Matrix::from_columns(to.dim(), &columns)
}

/// Largest arity at which entries of the given g-degree exist in the given
/// part (ignoring the cap), or `None` if there are none at all.
pub fn max_arity_in_degree(l: &Linfty, part: Part, g_degree: i32) -> Option<usize> {
    let (src, tgt) = l.bases(part);
    if src.is_empty() || tgt.is_empty() {
        return None;
    }
    let d = if part == Part::Gamma {
        g_degree - 1
    } else {
        g_degree
    };
    let sdegs: BTreeSet<i32> = (0..src.dim() as u8).map(|i| src.suspended_degree(i)).collect();
    let tdegs: BTreeSet<i32> = (0..tgt.dim() as u8).map(|i| tgt.suspended_degree(i)).collect();
    // suspended input degrees are at most -1, so d ≥ min target degree + n
    let bound = (d - *tdegs.iter().min().unwrap()).max(0) as usize;
    let mut sums: BTreeSet<i32> = [0].into_iter().collect();
    let mut best = None;
    for n in 1..=bound {
        sums = sums
            .iter()
            .flat_map(|s| sdegs.iter().map(move |x| s + x))
            .collect();
        if tdegs.iter().any(|t| sums.contains(&(t - d))) {
            best = Some(n);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{hochschild_differential, pullback, pushforward, Flavor};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn nilpotent() -> Arc<DGAlgebra> {
        let b = GradedBasis::from_degrees(&[0, 0]).unwrap();
        let mut p = vec![vec![vec![q(0); 2]; 2]; 2];
        p[0][0][1] = q(1);
        Arc::new(DGAlgebra::new(b, p, None).unwrap())
    }

    #[test]
    fn g_degree_examples() {
        let b = Arc::new(GradedBasis::from_degrees(&[0]).unwrap());
        let l = Linfty::new(b.clone(), b.clone(), 4);
        let mut x: GElement<Rational> = l.zero();
        x.alpha.add_term(vec![0, 0], 0, q(1));
        assert_eq!(x.g_degree(), Ok(1));
        let mut y: GElement<Rational> = l.zero();
        y.gamma.add_term(vec![0], 0, q(1));
        assert_eq!(y.g_degree(), Ok(1));
        let mut z: GElement<Rational> = l.zero();
        z.alpha.add_term(vec![0], 0, q(1));
        assert_eq!(z.g_degree(), Ok(0));
        assert!(x.plus(&z).g_degree().is_err());
    }

    #[test]
    fn chi_matches_definition() {
        let a = nilpotent();
        let l = Linfty::new(a.basis().clone(), a.basis().clone(), 4);
        let mut x: GElement<Rational> = l.zero();
        x.alpha = to_suspended(&a.mu2());
        let mut y: GElement<Rational> = l.zero();
        y.alpha.add_term(vec![0], 0, q(1));
        let r = d_corestriction(&l, &[&x, &y]);
        // (-1)^{1} s(α₁∘α₂^)
        let expect = insert(&x.alpha, &y.alpha, 4).neg();
        assert_eq!(r.alpha, expect);
        assert!(r.beta.is_zero() && r.gamma.is_zero());
    }

    #[test]
    fn unmatched_shapes_vanish() {
        let a = nilpotent();
        let l = Linfty::new(a.basis().clone(), a.basis().clone(), 4);
        let mut al: GElement<Rational> = l.zero();
        al.alpha = to_suspended(&a.mu2());
        let mut be: GElement<Rational> = l.zero();
        be.beta = to_suspended(&a.mu2());
        let mut ga: GElement<Rational> = l.zero();
        ga.gamma.add_term(vec![0], 0, q(1));
        ga.gamma.add_term(vec![1], 1, q(1));
        for w in [
            vec![&al, &be],
            vec![&be, &al],
            vec![&ga, &be],
            vec![&al, &ga],
            vec![&ga, &ga],
            vec![&al, &al, &al],
            vec![&be, &be, &ga],
            vec![&ga, &be, &ga],
            vec![&al, &ga, &ga],
        ] {
            assert!(d_corestriction(&l, &w).is_zero(), "shape of length {}", w.len());
        }
        assert!(!d_corestriction(&l, &[&be, &ga, &ga]).is_zero());
    }

    #[test]
    fn rho_two_on_null_algebra() {
        let b = Arc::new(GradedBasis::from_degrees(&[0]).unwrap());
        let l = Linfty::new(b.clone(), b.clone(), 4);
        let mut be: GElement<Rational> = l.zero();
        be.beta.add_term(vec![0, 0], 0, q(3));
        let mut g1: GElement<Rational> = l.zero();
        g1.gamma.add_term(vec![0], 0, q(2));
        let mut g2: GElement<Rational> = l.zero();
        g2.gamma.add_term(vec![0], 0, q(5));
        let r = d_corestriction(&l, &[&be, &g1, &g2]);
        // β(γ₁⊗γ₂)(e⊗e) = 3·2·5, even maps so no Koszul sign
        assert_eq!(r.gamma.get(&[0, 0], 0), Some(&q(30)));
    }

    #[test]
    fn encoded_morphism_is_mc() {
        let a = nilpotent();
        let l = Linfty::new(a.basis().clone(), a.basis().clone(), 4);
        for gamma in [
            AlgebraMorphism::identity(a.clone()),
            AlgebraMorphism::zero(a.clone(), a.clone()),
        ] {
            let x = encode(&gamma);
            assert_eq!(x.g_degree(), Ok(1));
            assert!(mc_full(&l, &x).is_zero());
        }
    }

    #[test]
    fn twisted_differential_matches_hochschild_formulas() {
        // degree-0 algebras: d^g_1(α) = (-1)^n HD(α) - γ_*(α) and
        // d^g_1(γ') = (-1)^{n+1} HD(γ') for arity n, through the dictionary
        let a = nilpotent();
        let gamma = AlgebraMorphism::identity(a.clone());
        let l = Linfty::new(a.basis().clone(), a.basis().clone(), 4);
        let x = encode(&gamma);
        let tw = Twisted::new(&l, x).unwrap();
        for n in 1..=3usize {
            for w in crate::hochschild::all_words(a.basis(), n)
                .into_iter()
                .filter(|w| w.len() == n)
            {
                for o in 0..2u8 {
                    let mut f = MultiMap::zero(a.basis().clone(), a.basis().clone());
                    f.add_term(w.clone(), o, q(1));
                    let sign = if n % 2 == 0 { q(1) } else { q(-1) };
                    // α part
                    let mut el: GElement<Rational> = l.zero();
                    el.alpha = to_suspended(&f);
                    let got = tw.bracket(&[&el]);
                    let hd = hochschild_differential(&f, Flavor::AA, &gamma, 5).unwrap();
                    assert_eq!(from_suspended(&got.alpha), hd.scale(&sign));
                    assert_eq!(from_suspended(&got.gamma), pushforward(&f, &gamma).neg());
                    // β part
                    let mut el: GElement<Rational> = l.zero();
                    el.beta = to_suspended(&f);
                    let got = tw.bracket(&[&el]);
                    let hd = hochschild_differential(&f, Flavor::BB, &gamma, 5).unwrap();
                    assert_eq!(from_suspended(&got.beta), hd.scale(&sign));
                    assert_eq!(from_suspended(&got.gamma), pullback(&f, &gamma));
                    // γ' part
                    let mut el: GElement<Rational> = l.zero();
                    el.gamma = to_suspended(&f);
                    let got = tw.bracket(&[&el]);
                    let hd = hochschild_differential(&f, Flavor::AB, &gamma, 5).unwrap();
                    assert_eq!(from_suspended(&got.gamma), hd.scale(&sign).neg());
                    assert!(got.alpha.is_zero() && got.beta.is_zero());
                }
            }
        }
    }

    #[test]
    fn slice_dimensions_for_degree_zero() {
        let a = nilpotent();
        let l = Linfty::new(a.basis().clone(), a.basis().clone(), 3);
        // g-degree 1: α, β of arity 2 (4·2 each), γ of arity 1 (2·2)
        assert_eq!(Slice::new(&l, 1).dim(), 8 + 8 + 4);
        assert_eq!(Slice::new(&l, 0).dim(), 4 + 4);
        assert_eq!(max_arity_in_degree(&l, Part::Alpha, 2), Some(3));
        assert_eq!(max_arity_in_degree(&l, Part::Gamma, 2), Some(2));
    }
}
