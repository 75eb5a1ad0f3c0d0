//! Coefficient rings: the rationals and truncated power series
//! `Q[t]/(t^{N+1})`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact_linalg::Rational;

/// Commutative coefficient ring of degree zero.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Zero element shaped like `self`.
    fn zero_like(&self) -> Self;
    /// Embedding of a rational constant, shaped like `self`.
    fn constant_like(&self, r: &Rational) -> Self;
}

impl Coeff for Rational {
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn constant_like(&self, r: &Rational) -> Self {
        r.clone()
    }
}

/// Element of `Q[t]/(t^{N+1})`: coefficient `i` multiplies `t^i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArtinSeries {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for ArtinSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}t^{i}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl ArtinSeries {
    pub fn zero(order: usize) -> Self {
        ArtinSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c t^power` (zero if `power > order`).
    pub fn monomial(order: usize, power: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        ArtinSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    /// In the maximal ideal: constant term zero.
    pub fn in_maximal_ideal(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops all powers above `k`.
    pub fn truncate_above(&self, k: usize) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().skip(k + 1) {
            *c = Rational::zero();
        }
        s
    }
}

impl Coeff for ArtinSeries {
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn add_assign(&mut self, other: &Self) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        ArtinSeries { coeffs: out }
    }

    fn neg(&self) -> Self {
        ArtinSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        ArtinSeries {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn zero_like(&self) -> Self {
        ArtinSeries::zero(self.order())
    }

    fn constant_like(&self, r: &Rational) -> Self {
        ArtinSeries::constant(self.order(), r.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn products_truncate() {
        let t = ArtinSeries::monomial(3, 1, q(1));
        let t2 = t.mul(&t);
        assert_eq!(t2, ArtinSeries::monomial(3, 2, q(1)));
        let t4 = t2.mul(&t2);
        assert!(Coeff::is_zero(&t4));
        assert_eq!(t.valuation(), Some(1));
        assert!(t.in_maximal_ideal());
    }

    #[test]
    fn serde_shape() {
        let s = ArtinSeries::from_coeffs(vec![q(0), Rational::new(1, 2)]);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["0","1/2"]"#);
        let back: ArtinSeries = serde_json::from_str(r#"["0","1/2"]"#).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn ring_axioms_on_samples() {
        let a = ArtinSeries::from_coeffs(vec![q(1), q(2), q(-1), q(3)]);
        let b = ArtinSeries::from_coeffs(vec![q(0), q(1), q(5), q(-2)]);
        let c = ArtinSeries::from_coeffs(vec![q(2), q(0), q(1), q(1)]);
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let mut bc = b.clone();
        bc.add_assign(&c);
        let mut ab_ac = a.mul(&b);
        ab_ac.add_assign(&a.mul(&c));
        assert_eq!(a.mul(&bc), ab_ac);
    }
}
