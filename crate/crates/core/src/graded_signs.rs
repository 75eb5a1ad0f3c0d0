//! Graded bases, the suspension dictionary sign, and Koszul signs.
//!
//! Degrees are cohomological. Suspension lowers degree by one: for `x` of
//! degree `d`, `sx` has degree `d - 1`. All symmetrization signs are taken on
//! suspended degrees.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_MIN_DEGREE: i32 = -4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("degree {degree} of {name:?} outside window [{min}, 0]")]
    DegreeOutOfRange { name: String, degree: i32, min: i32 },
    #[error("basis has {0} elements, at most 255 are supported")]
    TooLarge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
}

/// A finite graded vector space with a chosen ordered basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedBasis {
    elements: Vec<BasisElement>,
}

impl GradedBasis {
    pub fn new(elements: Vec<BasisElement>) -> Result<Self, BasisError> {
        Self::with_window(elements, DEFAULT_MIN_DEGREE)
    }

    pub fn with_window(elements: Vec<BasisElement>, min_degree: i32) -> Result<Self, BasisError> {
        if elements.len() > 255 {
            return Err(BasisError::TooLarge(elements.len()));
        }
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e.name.as_str()) {
                return Err(BasisError::DuplicateName(e.name.clone()));
            }
            if e.degree > 0 || e.degree < min_degree {
                return Err(BasisError::DegreeOutOfRange {
                    name: e.name.clone(),
                    degree: e.degree,
                    min: min_degree,
                });
            }
        }
        Ok(GradedBasis { elements })
    }

    /// Basis `e0, e1, ...` with the given degrees.
    pub fn from_degrees(degrees: &[i32]) -> Result<Self, BasisError> {
        Self::new(
            degrees
                .iter()
                .enumerate()
                .map(|(i, &degree)| BasisElement {
                    name: format!("e{i}"),
                    degree,
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn degree(&self, i: u8) -> i32 {
        self.elements[i as usize].degree
    }

    /// Degree of `s e_i`.
    pub fn suspended_degree(&self, i: u8) -> i32 {
        self.degree(i) - 1
    }

    pub fn name(&self, i: u8) -> &str {
        &self.elements[i as usize].name
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.elements.iter().map(|e| e.degree).collect()
    }

    /// Sum of suspended degrees of a tensor word of basis indices.
    pub fn word_suspended_degree(&self, word: &[u8]) -> i32 {
        word.iter().map(|&i| self.suspended_degree(i)).sum()
    }

    /// Sum of plain degrees of a tensor word.
    pub fn word_degree(&self, word: &[u8]) -> i32 {
        word.iter().map(|&i| self.degree(i)).sum()
    }
}

/// A sign `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(exponent: i64) -> Sign {
        if exponent.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `(-1)^ε` with `ε = Σ_{i=1}^{n-1} (n - i) x_i`, the sign of
/// `s(x_1 ⊗ ... ⊗ x_n) = ± sx_1 ⊗ ... ⊗ sx_n`.
pub fn suspension_sign(degrees: &[i32]) -> Sign {
    let n = degrees.len() as i64;
    let eps: i64 = degrees
        .iter()
        .enumerate()
        .map(|(i, &x)| (n - 1 - i as i64) * x as i64)
        .sum();
    Sign::from_parity(eps)
}

/// Sign of reordering factors of the given degrees so that the factor at
/// original position `perm[k]` ends up at position `k` (0-based).
///
/// Computed by an explicit bubble sort into the target order, collecting
/// `(-1)^{deg(a) deg(b)}` for every adjacent swap.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Sign {
    assert_eq!(perm.len(), degrees.len(), "permutation length");
    // rank[i] = target position of the factor now at i
    let mut rank = vec![0usize; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        rank[p] = k;
    }
    let mut degs = degrees.to_vec();
    let mut sign = Sign::Plus;
    let n = rank.len();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if rank[i] > rank[i + 1] {
                if (degs[i] * degs[i + 1]).rem_euclid(2) == 1 {
                    sign = sign.flip();
                }
                rank.swap(i, i + 1);
                degs.swap(i, i + 1);
            }
        }
    }
    sign
}

/// All interleavings of `m` identical markers with `positions` other
/// slots. Each pattern has length `m + positions`; `true` marks a marker.
pub fn shuffles(m: usize, positions: usize) -> Vec<Vec<bool>> {
    fn rec(m: usize, p: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if m == 0 && p == 0 {
            out.push(cur.clone());
            return;
        }
        if m > 0 {
            cur.push(true);
            rec(m - 1, p, cur, out);
            cur.pop();
        }
        if p > 0 {
            cur.push(false);
            rec(m, p - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, positions, &mut Vec::with_capacity(m + positions), &mut out);
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

/// Symmetrization of a word whose factors have the given suspended degrees:
/// `Σ_σ sign(σ) x_{σ(1)} ⊗ ... ⊗ x_{σ(n)}`, returned as
/// (order of original factor indices, sign) pairs.
pub fn symmetrize(suspended_degrees: &[i32]) -> Vec<(Vec<usize>, Sign)> {
    permutations(suspended_degrees.len())
        .into_iter()
        .map(|p| {
            let s = koszul_sign(&p, suspended_degrees);
            (p, s)
        })
        .collect()
}
