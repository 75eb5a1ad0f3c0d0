//! Exact linear algebra over the rationals.
//!
//! Everything downstream (cohomology, order-by-order solving, gauge witnesses)
//! reduces to kernels, ranks and linear solves of dense rational matrices.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("composition d_out * d_in is nonzero ({nonzero} nonzero entries)")]
    NotAComplex { nonzero: usize },
    #[error("vector does not lie in the cocycle space")]
    NotInSubspace,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Arbitrary precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// `1/k!`
    pub fn inverse_factorial(k: usize) -> Self {
        let mut f = BigInt::one();
        for i in 2..=k {
            f *= BigInt::from(i);
        }
        Rational(BigRational::new(BigInt::one(), f))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || LinalgError::Parse(s.to_string());
        match t.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational(BigRational::new(p, q)))
            }
            None => {
                let p: BigInt = t.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(p)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from_integer(n)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $atr<Rational> for Rational {
            fn $am(&mut self, rhs: Rational) {
                (self.0).$am(rhs.0)
            }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $am(&mut self, rhs: &'a Rational) {
                (self.0).$am(&rhs.0)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn count_nonzero(&self) -> usize {
        self.entries.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Gauss-Jordan elimination. Pivots are chosen left to right, first
    /// nonzero row from the top.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(prow, r);
            let inv = m.get(prow, c).recip();
            m.scale_row(prow, &inv);
            for r2 in 0..m.rows {
                if r2 != prow && !m.get(r2, c).is_zero() {
                    let f = m.get(r2, c).clone();
                    m.sub_row_multiple(r2, prow, &f);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rational) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            if !self.entries[idx].is_zero() {
                self.entries[idx] *= f;
            }
        }
    }

    // row[target] -= f * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &Rational) {
        for c in 0..self.cols {
            let s = &self.entries[source * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let delta = f * s;
            self.entries[target * self.cols + c] -= delta;
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }
}

/// Basis of the null space. One vector per free column; the free variable is
/// set to 1 and the other free variables to 0.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let Echelon { reduced, pivots } = m.echelon();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); m.cols()];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            let x = reduced.get(r, free);
            if !x.is_zero() {
                v[p] = -x;
            }
        }
        basis.push(v);
    }
    basis
}

/// Returns some `x` with `m x = b`, or `None` when the system is
/// inconsistent. Free variables are set to zero, so the solution is the
/// lexicographically first pivot solution.
pub fn solve(m: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let mut aug = Matrix::zeros(m.rows(), m.cols() + 1);
    for (r, br) in b.iter().enumerate() {
        for c in 0..m.cols() {
            let x = m.get(r, c);
            if !x.is_zero() {
                aug.set(r, c, x.clone());
            }
        }
        aug.set(r, m.cols(), br.clone());
    }
    let Echelon { reduced, pivots } = aug.echelon();
    if pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols()];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = reduced.get(r, m.cols()).clone();
    }
    Ok(Some(x))
}

/// `dim ker(d_out) - rank(d_in)`, after checking `d_out * d_in = 0`.
pub fn quotient_dim(d_out: &Matrix, d_in: &Matrix) -> Result<usize, LinalgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: d_out.cols(),
            found: d_in.rows(),
        });
    }
    let comp = d_out.mul(d_in)?;
    if !comp.is_zero() {
        return Err(LinalgError::NotAComplex {
            nonzero: comp.count_nonzero(),
        });
    }
    let kernel = d_out.cols() - d_out.rank();
    Ok(kernel - d_in.rank())
}

/// A chosen complement of `im(d_in)` inside `ker(d_out)`, used to turn
/// cocycles into coordinate vectors of their cohomology classes.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    ambient: usize,
    boundary_rank: usize,
    // columns: boundary basis followed by complement basis
    frame: Matrix,
    cocycle_test: Matrix,
}

impl QuotientSpace {
    pub fn new(d_out: &Matrix, d_in: &Matrix) -> Result<Self, LinalgError> {
        quotient_dim(d_out, d_in)?;
        let ambient = d_out.cols();
        let mut chosen: Vec<Vec<Rational>> = Vec::new();
        let col_echelon = d_in.echelon();
        for &p in &col_echelon.pivots {
            chosen.push(d_in.column(p));
        }
        let boundary_rank = chosen.len();
        for z in kernel_basis(d_out) {
            let mut trial = chosen.clone();
            trial.push(z.clone());
            if Matrix::from_columns(ambient, &trial).rank() == trial.len() {
                chosen.push(z);
            }
        }
        Ok(QuotientSpace {
            ambient,
            boundary_rank,
            frame: Matrix::from_columns(ambient, &chosen),
            cocycle_test: d_out.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.frame.cols() - self.boundary_rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Coordinates of the class of a cocycle in the chosen complement.
    pub fn class_of(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        if self.cocycle_test.mul_vec(v)?.iter().any(|x| !x.is_zero()) {
            return Err(LinalgError::NotInSubspace);
        }
        let coeffs = solve(&self.frame, v)?.ok_or(LinalgError::NotInSubspace)?;
        Ok(coeffs[self.boundary_rank..].to_vec())
    }

    /// Cocycles representing the chosen basis of the quotient.
    pub fn representatives(&self) -> Vec<Vec<Rational>> {
        (self.boundary_rank..self.frame.cols())
            .map(|c| self.frame.column(c))
            .collect()
    }

    pub fn is_coboundary(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        Ok(self.class_of(v)?.iter().all(Rational::is_zero))
    }
}
