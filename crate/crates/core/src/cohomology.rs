//! The cone complex of a morphism, the Gerstenhaber–Schack complex on the
//! same spaces, their cohomology, and the binary bracket on cohomology.
//!
//! Cone degree `c` is the g-degree plus one: for ungraded algebras it holds
//! `C^c(A,A) ⊕ C^c(B,B) ⊕ C^{c-1}(A,B)`. Coordinates are plain cochain
//! coefficients over the keys of the g-degree `c - 1` slice.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact_linalg::{quotient_dim, LinalgError, Matrix, QuotientSpace, Rational};
use crate::hochschild::{
    from_suspended, hochschild_differential, pullback, pushforward, to_suspended, AlgebraMorphism, Flavor,
    HochschildError,
};
use crate::linfty::{
    encode, max_arity_in_degree, symmetric_bracket, twisted_bracket, GElement, Linfty, Part, Slice,
};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("arity cap {cap} is too small for degree {max_degree} (need at least {})", max_degree + 1)]
    CapTooSmall { cap: usize, max_degree: i32 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error("representative {0} is not a cocycle")]
    NotACocycle(usize),
    #[error("representatives must be homogeneous")]
    NotHomogeneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    Cone,
    GerstenhaberSchack,
}

/// A bounded piece of a cochain complex: spaces in consecutive cone
/// degrees `first..first + spaces.len()`, and the differentials between
/// neighbours.
#[derive(Clone, Debug)]
pub struct Complex {
    pub kind: ComplexKind,
    pub space: Linfty,
    pub first: i32,
    pub spaces: Vec<Slice>,
    pub maps: Vec<Matrix>,
}

impl Complex {
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.first..self.first + self.spaces.len() as i32
    }

    pub fn slice(&self, degree: i32) -> Option<&Slice> {
        usize::try_from(degree - self.first)
            .ok()
            .and_then(|i| self.spaces.get(i))
    }

    /// Differential out of `degree` (zero matrix at the ends).
    pub fn map_from(&self, degree: i32) -> Matrix {
        let i = degree - self.first;
        let dim = |k: i32| {
            usize::try_from(k)
                .ok()
                .and_then(|k| self.spaces.get(k))
                .map_or(0, Slice::dim)
        };
        match usize::try_from(i).ok().and_then(|i| self.maps.get(i)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(dim(i + 1), dim(i)),
        }
    }

    /// Cohomology dimension at an interior degree.
    pub fn cohomology_dim(&self, degree: i32) -> Result<usize, CohomologyError> {
        Ok(quotient_dim(&self.map_from(degree), &self.map_from(degree - 1))?)
    }

    /// Whether truncation at the arity cap leaves degree `c` exact: no
    /// entries above the cap exist in cone degrees `c-1`, `c`, `c+1`.
    pub fn certified(&self, degree: i32) -> bool {
        certified(&self.space, degree)
    }
}

pub fn certified(l: &Linfty, degree: i32) -> bool {
    (degree - 2..=degree).all(|g| {
        [Part::Alpha, Part::Beta, Part::Gamma]
            .iter()
            .all(|&p| max_arity_in_degree(l, p, g).is_none_or(|n| n <= l.cap))
    })
}

fn plain_of(x: &GElement<Rational>) -> GElement<Rational> {
    GElement {
        alpha: from_suspended(&x.alpha),
        beta: from_suspended(&x.beta),
        gamma: from_suspended(&x.gamma),
    }
}

fn suspended_of(x: &GElement<Rational>) -> GElement<Rational> {
    plain_of(x)
}

/// Lowest cone degree with a nonempty space, capped at 1.
fn lowest_degree(l: &Linfty) -> i32 {
    (-2..1).find(|&c| Slice::new(l, c - 1).dim() > 0).unwrap_or(1)
}

fn assemble(
    kind: ComplexKind,
    gamma: &AlgebraMorphism,
    cap: usize,
    max_degree: i32,
    f: impl Fn(&GElement<Rational>, i32) -> Result<GElement<Rational>, HochschildError> + Sync,
) -> Result<Complex, CohomologyError> {
    if max_degree + 1 > cap as i32 {
        return Err(CohomologyError::CapTooSmall { cap, max_degree });
    }
    let l = Linfty::for_morphism(gamma, cap);
    let first = lowest_degree(&l) - 1;
    let spaces: Vec<Slice> = (first..=max_degree + 1).map(|c| Slice::new(&l, c - 1)).collect();
    let mut maps = Vec::new();
    for (i, w) in spaces.windows(2).enumerate() {
        let c = first + i as i32;
        let cols: Result<Vec<Vec<Rational>>, HochschildError> = (0..w[0].dim())
            .into_par_iter()
            .map(|k| Ok(w[1].coords(&f(&w[0].unit(&l, k), c - 1)?)))
            .collect();
        maps.push(Matrix::from_columns(w[1].dim(), &cols?));
    }
    for pair in maps.windows(2) {
        let sq = pair[1].mul(&pair[0])?;
        if !sq.is_zero() {
            return Err(LinalgError::NotAComplex {
                nonzero: sq.count_nonzero(),
            }
            .into());
        }
    }
    Ok(Complex {
        kind,
        space: l,
        first,
        spaces,
        maps,
    })
}

fn hd_parts(
    x: &GElement<Rational>,
    gamma: &AlgebraMorphism,
    cap: usize,
) -> Result<[crate::multimap::MultiMap<Rational>; 3], HochschildError> {
    // one arity of headroom; entries above the cap are dropped afterwards
    let hd = |f, fl| hochschild_differential(f, fl, gamma, cap + 1).map(|m| m.truncate(cap));
    Ok([
        hd(&x.alpha, Flavor::AA)?,
        hd(&x.beta, Flavor::BB)?,
        hd(&x.gamma, Flavor::AB)?,
    ])
}

/// The cone with differential `(-1)^{|x|+1} HD` on each summand and
/// connecting map `(α, β) ↦ γ^*(β) - γ_*(α)`, `|x|` the g-degree.
pub fn build_cone(gamma: &AlgebraMorphism, cap: usize, max_degree: i32) -> Result<Complex, CohomologyError> {
    assemble(ComplexKind::Cone, gamma, cap, max_degree, |x, g| {
        let [ha, hb, hg] = hd_parts(x, gamma, cap)?;
        let sign = if g % 2 == 0 {
            -Rational::one()
        } else {
            Rational::one()
        };
        let connecting = pullback(&x.beta, gamma).minus(&pushforward(&x.alpha, gamma));
        Ok(GElement {
            alpha: ha.scale(&sign),
            beta: hb.scale(&sign),
            gamma: hg.scale(&sign).plus(&connecting.truncate(cap)),
        })
    })
}

/// The same cone computed from the L∞-algebra: `d^g_1` for `g = encode(γ)`,
/// moved to plain coordinates by the suspension dictionary.
pub fn build_cone_from_brackets(
    gamma: &AlgebraMorphism,
    cap: usize,
    max_degree: i32,
) -> Result<Complex, CohomologyError> {
    let l = Linfty::for_morphism(gamma, cap);
    let base = encode(gamma);
    assemble(ComplexKind::Cone, gamma, cap, max_degree, |x, _| {
        Ok(plain_of(&twisted_bracket(&l, &base, &[&suspended_of(x)])))
    })
}

/// Untwisted Hochschild differentials and the opposite connecting map
/// `(α, β) ↦ γ_*(α) - γ^*(β)`; the morphism summand carries `-HD` as the
/// shifted copy in a mapping cone.
pub fn build_gs(gamma: &AlgebraMorphism, cap: usize, max_degree: i32) -> Result<Complex, CohomologyError> {
    assemble(ComplexKind::GerstenhaberSchack, gamma, cap, max_degree, |x, _| {
        let [ha, hb, hg] = hd_parts(x, gamma, cap)?;
        let connecting = pushforward(&x.alpha, gamma).minus(&pullback(&x.beta, gamma));
        Ok(GElement {
            alpha: ha,
            beta: hb,
            gamma: connecting.truncate(cap).minus(&hg),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub degree: i32,
    pub dim_cone: usize,
    pub dim_gs: usize,
    pub certified: bool,
    /// Arities present in this degree, per summand.
    pub arities: BTreeMap<String, Vec<usize>>,
}

/// Arities of the entries of one cone degree, per summand.
pub fn arities(slice: &Slice) -> BTreeMap<String, Vec<usize>> {
    let mut m: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for (p, w, _) in &slice.keys {
        let name = match p {
            Part::Alpha => "alpha",
            Part::Beta => "beta",
            Part::Gamma => "phi",
        };
        m.entry(name.to_string()).or_default().insert(w.len());
    }
    m.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect()
}

/// One row per degree from the lowest nonempty one up to `max_degree`.
pub fn cohomology_table(
    cone: &Complex,
    gs: &Complex,
    max_degree: i32,
) -> Result<Vec<TableRow>, CohomologyError> {
    let mut rows = Vec::new();
    for c in cone.first + 1..=max_degree {
        rows.push(TableRow {
            degree: c,
            dim_cone: cone.cohomology_dim(c)?,
            dim_gs: gs.cohomology_dim(c)?,
            certified: cone.certified(c),
            arities: cone.slice(c).map(arities).unwrap_or_default(),
        });
    }
    Ok(rows)
}

/// Cohomology of `d^g_1` at one g-degree, in suspended coordinates.
pub struct LinftyCohomology {
    pub space: Linfty,
    pub base: GElement<Rational>,
}

impl LinftyCohomology {
    pub fn new(gamma: &AlgebraMorphism, cap: usize) -> Self {
        LinftyCohomology {
            space: Linfty::for_morphism(gamma, cap),
            base: encode(gamma),
        }
    }

    pub fn differential(&self, x: &GElement<Rational>) -> GElement<Rational> {
        twisted_bracket(&self.space, &self.base, &[x])
    }

    /// Slice and quotient space at the given g-degree.
    pub fn quotient(&self, g_degree: i32) -> Result<(Slice, QuotientSpace), CohomologyError> {
        let l = &self.space;
        let below = Slice::new(l, g_degree - 1);
        let here = Slice::new(l, g_degree);
        let above = Slice::new(l, g_degree + 1);
        let d_in = crate::linfty::slice_matrix(l, &below, &here, |x| self.differential(x));
        let d_out = crate::linfty::slice_matrix(l, &here, &above, |x| self.differential(x));
        Ok((here, QuotientSpace::new(&d_out, &d_in)?))
    }

    /// Cocycles representing a basis of the cohomology at a g-degree.
    pub fn representatives(&self, g_degree: i32) -> Result<Vec<GElement<Rational>>, CohomologyError> {
        let (slice, q) = self.quotient(g_degree)?;
        Ok(q.representatives()
            .iter()
            .map(|v| slice.element(&self.space, v))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketEntry {
    pub left: usize,
    pub right: usize,
    /// Cone degree of the bracket.
    pub degree: i32,
    pub class: Vec<Rational>,
}

/// `ℓ^g_2` on pairs of representative cocycles, projected to cohomology.
pub fn linfty_binary_on_cohomology(
    h: &LinftyCohomology,
    classes: &[GElement<Rational>],
) -> Result<Vec<BracketEntry>, CohomologyError> {
    let mut degrees = Vec::new();
    for (i, x) in classes.iter().enumerate() {
        if x.is_zero() {
            degrees.push(None);
            continue;
        }
        let g = x.g_degree().map_err(|_| CohomologyError::NotHomogeneous)?;
        if !h.differential(x).is_zero() {
            return Err(CohomologyError::NotACocycle(i));
        }
        degrees.push(Some(g));
    }
    let mut quotients: BTreeMap<i32, (Slice, QuotientSpace)> = BTreeMap::new();
    let mut out = Vec::new();
    for i in 0..classes.len() {
        for j in i..classes.len() {
            let (Some(gi), Some(gj)) = (degrees[i], degrees[j]) else {
                continue;
            };
            let g = gi + gj;
            if let std::collections::btree_map::Entry::Vacant(e) = quotients.entry(g) {
                e.insert(h.quotient(g)?);
            }
            let (slice, q) = &quotients[&g];
            let b = symmetric_bracket(&h.space, &h.base, &[&classes[i], &classes[j]])
                .map_err(|_| CohomologyError::NotHomogeneous)?;
            out.push(BracketEntry {
                left: i,
                right: j,
                degree: g + 1,
                class: q.class_of(&slice.coords(&b))?,
            });
        }
    }
    Ok(out)
}

/// Plain cochains of one cone degree to suspended g-elements, for callers
/// holding cone coordinates.
pub fn cone_to_g(slice: &Slice, l: &Linfty, coords: &[Rational]) -> GElement<Rational> {
    let plain = slice.element(l, coords);
    GElement {
        alpha: to_suspended(&plain.alpha),
        beta: to_suspended(&plain.beta),
        gamma: to_suspended(&plain.gamma),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_signs::GradedBasis;
    use crate::hochschild::DGAlgebra;
    use std::sync::Arc;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn null() -> Arc<DGAlgebra> {
        Arc::new(
            DGAlgebra::new(
                GradedBasis::from_degrees(&[0]).unwrap(),
                vec![vec![vec![q(0)]]],
                None,
            )
            .unwrap(),
        )
    }

    #[test]
    fn zero_algebras_have_empty_tables() {
        let z = Arc::new(DGAlgebra::zero_algebra());
        let g = AlgebraMorphism::identity(z);
        let cone = build_cone(&g, 4, 3).unwrap();
        let gs = build_gs(&g, 4, 3).unwrap();
        for row in cohomology_table(&cone, &gs, 3).unwrap() {
            assert_eq!((row.dim_cone, row.dim_gs), (0, 0));
        }
    }

    #[test]
    fn null_algebra_identity() {
        // HD = 0 and the connecting map is (α, β) ↦ β - α, so the kernel
        // {α = β} ⊕ C^{c-1} modulo the image C^{c-1} leaves one class
        let g = AlgebraMorphism::identity(null());
        let cone = build_cone(&g, 4, 3).unwrap();
        let gs = build_gs(&g, 4, 3).unwrap();
        let table = cohomology_table(&cone, &gs, 3).unwrap();
        let dims: Vec<(i32, usize, usize, bool)> = table
            .iter()
            .map(|r| (r.degree, r.dim_cone, r.dim_gs, r.certified))
            .collect();
        assert_eq!(dims, vec![(1, 1, 1, true), (2, 1, 1, true), (3, 1, 1, true)]);
    }

    #[test]
    fn cap_must_exceed_degree() {
        let g = AlgebraMorphism::identity(null());
        assert!(matches!(
            build_cone(&g, 3, 3),
            Err(CohomologyError::CapTooSmall { .. })
        ));
    }
}
