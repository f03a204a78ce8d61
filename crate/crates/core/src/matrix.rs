//! Dense row-major matrices and vectors, plus the handful of primitives the
//! iterations are written in terms of: the sign matrix `s(A)`, row 1-norms,
//! induced matrix norms and forward substitution.
//!
//! Public constructors reject NaN and infinities. Arithmetic on valid values
//! is not re-checked, so a diverging iteration can still overflow; the
//! driver in [`crate::iterate`] watches for that.

use std::fmt;
use std::ops::{Deref, Index, IndexMut};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{mismatch, Error, Result};

/// Relative factor used to decide that a pivot or diagonal entry is zero.
pub const SINGULARITY_FACTOR: f64 = 1e-12;

/// Which matrix norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Induced 1-norm: maximum absolute column sum.
    One,
    /// Induced infinity-norm: maximum absolute row sum.
    #[serde(rename = "inf")]
    Infinity,
    Frobenius,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::One, NormKind::Infinity, NormKind::Frobenius];

    pub fn name(self) -> &'static str {
        match self {
            NormKind::One => "one",
            NormKind::Infinity => "inf",
            NormKind::Frobenius => "frobenius",
        }
    }

    /// The vector norm this matrix norm is consistent with
    /// (`‖Mx‖ ≤ ‖M‖·‖x‖`).
    pub fn vector_norm(self, v: &[f64]) -> f64 {
        match self {
            NormKind::One => norm_one(v),
            NormKind::Infinity => norm_inf(v),
            NormKind::Frobenius => norm_two(v),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A real column vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Vector(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Vector(vec![0.0; len])
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        Vector(entries)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn norm_one(&self) -> f64 {
        norm_one(&self.0)
    }

    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.0)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(self.iter().zip(other.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(self.iter().zip(other.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: f64) -> Vector {
        Vector(self.iter().map(|v| v * factor).collect())
    }

    pub fn concat(&self, other: &Vector) -> Vector {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Vector(out)
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

// Reports may carry a diverged iterate; JSON has no infinities, so those
// travel as `null` and come back as NaN.
impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(Vector(raw.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect()))
    }
}

pub fn norm_one(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn norm_two(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(mismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(mismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        DenseMatrix::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(mismatch(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok(Vector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn mul_mat(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(mismatch("matrix subtraction with different shapes"));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, factor: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Multiplies column `j` by `factors[j]`, i.e. `self * diag(factors)`.
    pub fn scale_columns(&self, factors: &[f64]) -> DenseMatrix {
        debug_assert_eq!(factors.len(), self.cols);
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * factors[j])
    }

    /// Multiplies row `i` by `factors[i]`, i.e. `diag(factors) * self`.
    pub fn scale_rows(&self, factors: &[f64]) -> DenseMatrix {
        debug_assert_eq!(factors.len(), self.rows);
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * factors[i])
    }

    /// Contiguous block `[row_start, row_end) x [col_start, col_end)`.
    pub fn submatrix(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Result<DenseMatrix> {
        if rows.end > self.rows || cols.end > self.cols || rows.start > rows.end || cols.start > cols.end {
            return Err(mismatch(format!(
                "block {rows:?}x{cols:?} outside {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(DenseMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)]
        }))
    }

    /// New matrix whose column `k` is column `indices[k]` of `self`.
    pub fn select_columns(&self, indices: &[usize]) -> Result<DenseMatrix> {
        if let Some(&bad) = indices.iter().find(|&&j| j >= self.cols) {
            return Err(mismatch(format!("column {bad} out of range for {} columns", self.cols)));
        }
        Ok(DenseMatrix::from_fn(self.rows, indices.len(), |i, k| self[(i, indices[k])]))
    }

    pub fn diagonal(&self) -> Vector {
        Vector((0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect())
    }

    /// Lower triangle including the diagonal; everything above is zeroed.
    pub fn lower_triangle(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| if j <= i { self[(i, j)] } else { 0.0 })
    }

    /// The diagonal as a matrix, everything else zero.
    pub fn diagonal_part(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| if i == j { self[(i, j)] } else { 0.0 })
    }

    /// Appends `rhs` as an extra column.
    pub fn augment(&self, rhs: &[f64]) -> Result<DenseMatrix> {
        if rhs.len() != self.rows {
            return Err(mismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                rhs.len(),
                self.rows
            )));
        }
        Ok(DenseMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[i]
            }
        }))
    }

    pub fn norm(&self, which: NormKind) -> f64 {
        matrix_norm(self, which)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$.prec$}", v, width = prec + 6, prec = prec)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `s(A)`: the `n x m` matrix of entrywise signs of `Aᵀ`. Zero maps to zero
/// exactly; there is no tolerance band.
pub fn sign_matrix(a: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.cols, a.rows, |j, i| sign(a[(i, j)]))
}

/// The l1-norm of every row.
pub fn row_one_norms(a: &DenseMatrix) -> Vector {
    Vector((0..a.rows).map(|i| norm_one(a.row(i))).collect())
}

pub fn matrix_norm(a: &DenseMatrix, which: NormKind) -> f64 {
    match which {
        NormKind::One => (0..a.cols)
            .map(|j| (0..a.rows).map(|i| a[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Infinity => (0..a.rows).map(|i| norm_one(a.row(i))).fold(0.0, f64::max),
        NormKind::Frobenius => norm_two(&a.data),
    }
}

/// Pivots at or below this magnitude count as zero:
/// `1e-12 * ‖a‖∞`, or `1e-12` for the zero matrix.
pub fn singularity_threshold(a: &DenseMatrix) -> f64 {
    let scale = matrix_norm(a, NormKind::Infinity);
    SINGULARITY_FACTOR * if scale > 0.0 { scale } else { 1.0 }
}

fn check_square_system(l: &DenseMatrix, rhs_len: usize) -> Result<()> {
    if !l.is_square() {
        return Err(Error::NotSquare {
            rows: l.rows,
            cols: l.cols,
        });
    }
    if rhs_len != l.rows {
        return Err(mismatch(format!(
            "right-hand side has length {rhs_len}, matrix is {}x{}",
            l.rows, l.cols
        )));
    }
    Ok(())
}

/// Solves `l y = rhs` for lower-triangular `l`. Entries above the diagonal
/// are never read.
pub fn forward_substitution(l: &DenseMatrix, rhs: &[f64]) -> Result<Vector> {
    check_square_system(l, rhs.len())?;
    let tol = singularity_threshold(&l.lower_triangle());
    let mut y = vec![0.0; l.rows];
    for i in 0..l.rows {
        let pivot = l[(i, i)];
        if pivot.abs() <= tol {
            return Err(Error::SingularTriangular { index: i });
        }
        let acc: f64 = (0..i).map(|j| l[(i, j)] * y[j]).sum();
        y[i] = (rhs[i] - acc) / pivot;
    }
    Ok(Vector(y))
}

/// Solves the row-vector system `y l = c` for lower-triangular `l`
/// (equivalently `lᵀ yᵀ = cᵀ`, a backward sweep).
pub(crate) fn solve_row_lower(l: &DenseMatrix, c: &[f64]) -> Result<Vector> {
    check_square_system(l, c.len())?;
    let tol = singularity_threshold(&l.lower_triangle());
    let n = l.rows;
    let mut y = vec![0.0; n];
    for j in (0..n).rev() {
        let pivot = l[(j, j)];
        if pivot.abs() <= tol {
            return Err(Error::SingularTriangular { index: j });
        }
        let acc: f64 = (j + 1..n).map(|k| y[k] * l[(k, j)]).sum();
        y[j] = (c[j] - acc) / pivot;
    }
    Ok(Vector(y))
}
