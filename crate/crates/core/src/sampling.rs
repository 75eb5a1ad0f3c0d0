//! Random valid inputs for the property suites.
//!
//! Structure constants are drawn from `{-2,...,2}/{1,2}` on the entries
//! allowed by the grading; candidates violating associativity, `δ² = 0`,
//! Leibniz, or the morphism axioms are rejected and counted.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::coeff::Coeff;
use crate::exact_linalg::{kernel_basis, Matrix, Rational};
use crate::graded_signs::GradedBasis;
use crate::hochschild::{validate_algebra, validate_morphism, AlgebraMorphism, DGAlgebra};
use crate::linfty::{GElement, Linfty, Part, Slice};

#[derive(Clone, Copy, Debug)]
pub struct AlgebraShape {
    pub max_dim: usize,
    pub min_degree: i32,
    /// Allow a nonzero differential.
    pub dg: bool,
}

impl Default for AlgebraShape {
    fn default() -> Self {
        AlgebraShape {
            max_dim: 3,
            min_degree: -2,
            dg: true,
        }
    }
}

/// Accepted and rejected candidate counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Rejections {
    pub accepted: usize,
    pub rejected: usize,
}

impl Rejections {
    pub fn absorb(&mut self, other: Rejections) {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
    }

    pub fn rate(&self) -> f64 {
        let total = self.accepted + self.rejected;
        if total == 0 {
            0.0
        } else {
            self.rejected as f64 / total as f64
        }
    }
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(-2i64..=2);
    let d = rng.gen_range(1i64..=2);
    Rational::new(n, d)
}

fn sparse_entry<R: Rng>(rng: &mut R, density: f64) -> Rational {
    if rng.gen_bool(density) {
        small_rational(rng)
    } else {
        Rational::zero()
    }
}

fn random_degrees<R: Rng>(rng: &mut R, dim: usize, min_degree: i32) -> Vec<i32> {
    // half the time the algebra is concentrated in degree 0
    if min_degree == 0 || rng.gen_bool(0.4) {
        return vec![0; dim];
    }
    let mut d: Vec<i32> = (0..dim).map(|_| rng.gen_range(min_degree..=0)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// One candidate with the given degrees, not yet validated.
fn candidate<R: Rng>(rng: &mut R, degrees: &[i32], dg: bool) -> DGAlgebra {
    let n = degrees.len();
    let density = rng.gen_range(0.15..0.6);
    let mut product = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if degrees[k] == degrees[i] + degrees[j] {
                    product[i][j][k] = sparse_entry(rng, density);
                }
            }
        }
    }
    let mut differential = vec![vec![Rational::zero(); n]; n];
    if dg && rng.gen_bool(0.5) {
        for i in 0..n {
            for k in 0..n {
                if degrees[k] == degrees[i] + 1 {
                    differential[i][k] = sparse_entry(rng, 0.7);
                }
            }
        }
    }
    let basis = GradedBasis::from_degrees(degrees).expect("degrees in window");
    DGAlgebra::new(basis, product, Some(differential)).expect("well-shaped candidate")
}

/// A candidate with a nonzero differential: `δ` is drawn first, then the
/// product is a random combination of a basis of the solutions of the
/// Leibniz rule, which is linear in the structure constants once `δ` is
/// fixed. Only associativity is left to rejection.
fn dg_candidate<R: Rng>(rng: &mut R, degrees: &[i32]) -> DGAlgebra {
    let n = degrees.len();
    let mut delta = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if degrees[k] == degrees[i] + 1 {
                delta[i][k] = sparse_entry(rng, 0.7);
            }
        }
    }
    let vars: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .filter(|&(i, j, k)| degrees[k] == degrees[i] + degrees[j])
        .collect();
    // row (i, j, l): δ(e_i e_j) - δ(e_i) e_j - (-1)^{|e_i|} e_i δ(e_j), component l
    let mut rows = vec![vec![Rational::zero(); vars.len()]; n * n * n];
    for (v, &(a, b, c)) in vars.iter().enumerate() {
        for l in 0..n {
            // μ_abc δ_cl contributes to (a, b, l)
            rows[(a * n + b) * n + l][v] += &delta[c][l];
            if c == l {
                // μ_abl appears in δ(e_i) e_b with i such that δ_ia ≠ 0
                for i in 0..n {
                    if !delta[i][a].is_zero() {
                        rows[(i * n + b) * n + l][v] -= &delta[i][a];
                    }
                }
                // and in e_a δ(e_j) with δ_jb ≠ 0
                for j in 0..n {
                    if !delta[j][b].is_zero() {
                        let c = if degrees[a].rem_euclid(2) == 1 {
                            delta[j][b].clone()
                        } else {
                            -delta[j][b].clone()
                        };
                        rows[(a * n + j) * n + l][v] += &c;
                    }
                }
            }
        }
    }
    let mut product = vec![vec![vec![Rational::zero(); n]; n]; n];
    if !vars.is_empty() {
        let m = Matrix::from_rows(rows).expect("rectangular");
        for kv in kernel_basis(&m) {
            if rng.gen_bool(0.6) {
                let c = small_rational(rng);
                for (v, &(a, b, k)) in vars.iter().enumerate() {
                    product[a][b][k] += &(&kv[v] * &c);
                }
            }
        }
    }
    let basis = GradedBasis::from_degrees(degrees).expect("degrees in window");
    DGAlgebra::new(basis, product, Some(delta)).expect("well-shaped candidate")
}

/// A random valid dg algebra of dimension `1..=max_dim`. When the degrees
/// allow a differential, most draws insist on a nonzero one for up to
/// `DG_ATTEMPTS` candidates before falling back to unconstrained sampling.
pub fn random_algebra<R: Rng>(rng: &mut R, shape: AlgebraShape) -> (DGAlgebra, Rejections) {
    const DG_ATTEMPTS: usize = 2000;
    let mut stats = Rejections::default();
    let dim = rng.gen_range(1..=shape.max_dim.max(1));
    let degrees = random_degrees(rng, dim, shape.min_degree);
    let room = degrees.iter().any(|&d| degrees.contains(&(d + 1)));
    let mut force = shape.dg && room && rng.gen_bool(0.7);
    loop {
        if force && stats.rejected >= DG_ATTEMPTS {
            force = false;
        }
        let a = if force {
            dg_candidate(rng, &degrees)
        } else {
            candidate(rng, &degrees, shape.dg)
        };
        if validate_algebra(&a).is_empty() && !(force && a.delta().is_zero()) {
            stats.accepted += 1;
            return (a, stats);
        }
        stats.rejected += 1;
    }
}

/// A random valid morphism between random valid algebras. Mixes identities,
/// maps into a random algebra found by rejection sampling, and zero maps as a
/// fallback when rejection sampling runs out of attempts.
pub fn random_morphism<R: Rng>(rng: &mut R, shape: AlgebraShape) -> (AlgebraMorphism, Rejections) {
    let (a, mut stats) = random_algebra(rng, shape);
    let a = Arc::new(a);
    match rng.gen_range(0..3) {
        0 => {
            stats.accepted += 1;
            (AlgebraMorphism::identity(a), stats)
        }
        1 => {
            // B = A, γ a random endomorphism
            let m = random_linear_map(rng, &a, &a, 200, &mut stats);
            (m, stats)
        }
        _ => {
            let (b, s2) = random_algebra(rng, shape);
            stats.absorb(s2);
            let m = random_linear_map(rng, &a, &Arc::new(b), 200, &mut stats);
            (m, stats)
        }
    }
}

fn random_linear_map<R: Rng>(
    rng: &mut R,
    a: &Arc<DGAlgebra>,
    b: &Arc<DGAlgebra>,
    attempts: usize,
    stats: &mut Rejections,
) -> AlgebraMorphism {
    let choices = [-1i64, 0, 0, 1, 1];
    for _ in 0..attempts {
        let matrix: Vec<Vec<Rational>> = (0..a.dim())
            .map(|i| {
                (0..b.dim())
                    .map(|k| {
                        if a.basis().degree(i as u8) == b.basis().degree(k as u8) {
                            Rational::from_integer(*choices.choose(rng).unwrap())
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let m = AlgebraMorphism::new(a.clone(), b.clone(), matrix).expect("shaped");
        if validate_morphism(&m).is_empty() {
            stats.accepted += 1;
            return m;
        }
        stats.rejected += 1;
    }
    stats.accepted += 1;
    AlgebraMorphism::zero(a.clone(), b.clone())
}

/// Random element of one g-degree slice, restricted to the given parts.
/// Coefficients are small rationals with the given density; `coeff` lifts
/// them into the coefficient ring.
pub fn random_element<R: Rng, C: Coeff>(
    rng: &mut R,
    l: &Linfty,
    g_degree: i32,
    parts: &[Part],
    density: f64,
    coeff: impl Fn(&mut R, Rational) -> C,
) -> GElement<C> {
    let slice = Slice::with_parts(l, g_degree, parts);
    let mut g = l.zero();
    for (p, w, o) in &slice.keys {
        if rng.gen_bool(density) {
            let r = small_rational(rng);
            if !r.is_zero() {
                let c = coeff(rng, r);
                g.part_mut(*p).add_term(w.clone(), *o, c);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_inputs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (m, stats) = random_morphism(&mut rng, AlgebraShape::default());
            assert!(validate_algebra(m.source()).is_empty());
            assert!(validate_algebra(m.target()).is_empty());
            assert!(validate_morphism(&m).is_empty());
            assert!(stats.accepted >= 1);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (m, _) = random_morphism(&mut rng, AlgebraShape::default());
            m
        };
        assert_eq!(run(3), run(3));
    }
}
