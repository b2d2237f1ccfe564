//! Dense square matrices over the rationals, determinant-one elements and
//! unipotent elementary matrices.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::rational::{format_rational, int, is_integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix must be at least 2x2 (got {0})")]
    TooSmall(usize),
    #[error("row {row} has {len} entries, expected {n}")]
    Ragged { row: usize, len: usize, n: usize },
    #[error("determinant is {0}, expected 1")]
    NotSpecialLinear(String),
    #[error("elementary matrix needs distinct in-range indices (n = {n}, i = {i}, j = {j})")]
    BadElementaryIndex { n: usize, i: usize, j: usize },
}

/// Row-major `n x n` matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl SquareMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        SquareMatrix { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        SquareMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n < 2 {
            return Err(MatrixError::TooSmall(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::Ragged {
                    row,
                    len: r.len(),
                    n,
                });
            }
            entries.extend(r);
        }
        Ok(SquareMatrix { n, entries })
    }

    /// Convenience constructor for integer literals; panics on ragged input.
    pub fn from_int_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        SquareMatrix::from_rows(rows).expect("square literal")
    }

    pub fn diagonal(values: Vec<Rational>) -> Self {
        let n = values.len();
        let mut m = SquareMatrix::zero(n);
        for (i, v) in values.into_iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.rows().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(is_integer)
    }

    pub fn multiply(&self, other: &SquareMatrix) -> Result<SquareMatrix, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    acc += a * b;
                }
                entries.push(acc);
            }
        }
        Ok(SquareMatrix { n, entries })
    }

    /// Exact determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] / &p;
                for k in col..n {
                    let delta = &factor * &a[col * n + k];
                    a[r * n + k] -= delta;
                }
            }
        }
        det
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> SquareMatrix {
        let n = self.n - 1;
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in self.rows().enumerate() {
            if i == skip_row {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                if j != skip_col {
                    entries.push(x.clone());
                }
            }
        }
        SquareMatrix { n, entries }
    }

    /// Classical adjugate: transpose of the cofactor matrix.
    pub fn adjugate(&self) -> SquareMatrix {
        let n = self.n;
        if n == 2 {
            let (a, b, c, d) = (
                self.get(0, 0),
                self.get(0, 1),
                self.get(1, 0),
                self.get(1, 1),
            );
            return SquareMatrix {
                n,
                entries: vec![d.clone(), -b.clone(), -c.clone(), a.clone()],
            };
        }
        let mut out = SquareMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(i, j).determinant();
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                out.entries[j * n + i] = cof;
            }
        }
        out
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = row.iter().map(format_rational).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, "]")
    }
}

/// A matrix of determinant exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpecialLinearElement(SquareMatrix);

impl SpecialLinearElement {
    pub fn new(matrix: SquareMatrix) -> Result<Self, MatrixError> {
        let det = matrix.determinant();
        if !det.is_one() {
            return Err(MatrixError::NotSpecialLinear(format_rational(&det)));
        }
        Ok(SpecialLinearElement(matrix))
    }

    pub fn identity(n: usize) -> Self {
        SpecialLinearElement(SquareMatrix::identity(n))
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, MatrixError> {
        self.0.multiply(&other.0).map(SpecialLinearElement)
    }

    /// Inverse via the adjugate; exact because the determinant is one.
    pub fn inverse(&self) -> Self {
        SpecialLinearElement(self.0.adjugate())
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = SpecialLinearElement::identity(self.n());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self, MatrixError> {
        if a.n() != b.n() {
            return Err(MatrixError::DimensionMismatch(a.n(), b.n()));
        }
        Ok(&(&(&a.inverse() * &b.inverse()) * a) * b)
    }
}

impl Mul for &SpecialLinearElement {
    type Output = SpecialLinearElement;

    /// Panics on dimension mismatch; use [`SpecialLinearElement::multiply`]
    /// for the checked form.
    fn mul(self, rhs: &SpecialLinearElement) -> SpecialLinearElement {
        self.multiply(rhs).expect("dimension mismatch")
    }
}

impl fmt::Display for SpecialLinearElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Identity plus `t` at position `(i, j)`, `i != j`. Indices are zero-based;
/// the display form and JSON encoding use one-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryMatrix {
    n: usize,
    i: usize,
    j: usize,
    t: Rational,
}

impl ElementaryMatrix {
    pub fn new(n: usize, i: usize, j: usize, t: Rational) -> Result<Self, MatrixError> {
        if i == j || i >= n || j >= n {
            return Err(MatrixError::BadElementaryIndex { n, i, j });
        }
        Ok(ElementaryMatrix { n, i, j, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn inverse(&self) -> Self {
        ElementaryMatrix {
            t: -self.t.clone(),
            ..self.clone()
        }
    }

    pub fn realize(&self) -> SpecialLinearElement {
        let mut m = SquareMatrix::identity(self.n);
        m.set(self.i, self.j, self.t.clone());
        SpecialLinearElement(m)
    }

    /// Replaces `m` with `m * E_ij(t)`: `col_j += t * col_i`.
    pub fn apply_right(&self, m: &mut SquareMatrix) {
        let n = m.n;
        for k in 0..n {
            let src = &m.entries[k * n + self.i];
            if src.is_zero() {
                continue;
            }
            let delta = src * &self.t;
            m.entries[k * n + self.j] += delta;
        }
    }

    /// Applies the row operation `row_i += t * row_j` in place, i.e. replaces
    /// `m` with `E_ij(t) * m`.
    pub fn apply_left(&self, m: &mut SquareMatrix) {
        let n = m.n;
        for k in 0..n {
            let src = &m.entries[self.j * n + k];
            if src.is_zero() {
                continue;
            }
            let delta = &self.t * src;
            m.entries[self.i * n + k] += delta;
        }
    }
}

impl fmt::Display for ElementaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E{}{}({})",
            self.i + 1,
            self.j + 1,
            format_rational(&self.t)
        )
    }
}

/// Largest absolute entry, handy for growth statistics.
pub fn max_abs_entry(m: &SquareMatrix) -> Rational {
    m.entries
        .iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}
