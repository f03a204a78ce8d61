//! Splitting an underdetermined system `A = [B B̃]` into a square head block
//! and a rectangular tail block, and moving iterates between the split and
//! the original column order.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::matrix::{singularity_threshold, DenseMatrix, Vector};

/// How the head block's columns are chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermutationPolicy {
    /// The first `m` columns, in their original order.
    #[default]
    Identity,
    /// Columns picked by Gaussian elimination with column pivoting, so the
    /// head block is nonsingular whenever `rank(A) = m`.
    PivotColumns,
}

/// A system `A x = b` with `A`'s columns reordered and split at `m`.
///
/// `column_perm[slot]` is the original column that sits at `slot` in
/// `[head | tail]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedSystem {
    head: DenseMatrix,
    tail: DenseMatrix,
    rhs: Vector,
    column_perm: Vec<usize>,
}

impl PartitionedSystem {
    /// Partitions `a` using an explicit column permutation.
    pub fn with_permutation(a: &DenseMatrix, b: &Vector, column_perm: Vec<usize>) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        check_underdetermined(m, n)?;
        if b.len() != m {
            return Err(mismatch(format!(
                "right-hand side has length {}, matrix has {m} rows",
                b.len()
            )));
        }
        validate_permutation(&column_perm, n)?;
        let permuted = a.select_columns(&column_perm)?;
        Ok(PartitionedSystem {
            head: permuted.submatrix(0..m, 0..m)?,
            tail: permuted.submatrix(0..m, m..n)?,
            rhs: b.clone(),
            column_perm,
        })
    }

    /// `B`, the `m x m` head block.
    pub fn head(&self) -> &DenseMatrix {
        &self.head
    }

    /// `B̃`, the `m x (n - m)` tail block.
    pub fn tail(&self) -> &DenseMatrix {
        &self.tail
    }

    pub fn rhs(&self) -> &Vector {
        &self.rhs
    }

    pub fn column_perm(&self) -> &[usize] {
        &self.column_perm
    }

    /// Number of equations.
    pub fn m(&self) -> usize {
        self.head.rows()
    }

    /// Number of unknowns.
    pub fn n(&self) -> usize {
        self.column_perm.len()
    }

    /// Rebuilds `A` in its original column order.
    pub fn original_matrix(&self) -> DenseMatrix {
        let (m, n) = (self.m(), self.n());
        let mut a = DenseMatrix::zeros(m, n);
        for (slot, &col) in self.column_perm.iter().enumerate() {
            for i in 0..m {
                a[(i, col)] = if slot < m {
                    self.head[(i, slot)]
                } else {
                    self.tail[(i, slot - m)]
                };
            }
        }
        a
    }
}

/// An iterate split conformably with a [`PartitionedSystem`]: `head` holds
/// the unknowns paired with `B`, `tail` the ones paired with `B̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitIterate {
    pub head: Vector,
    pub tail: Vector,
}

impl SplitIterate {
    pub fn new(head: Vector, tail: Vector) -> Self {
        SplitIterate { head, tail }
    }

    pub fn len(&self) -> usize {
        self.head.len() + self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_underdetermined(m: usize, n: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(Error::NotUnderdetermined { rows: m, cols: n });
    }
    Ok(())
}

fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(mismatch(format!(
            "permutation has {} entries, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(mismatch(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Splits `(a, b)` into head and tail blocks under `policy`.
pub fn partition_system(
    a: &DenseMatrix,
    b: &Vector,
    policy: PermutationPolicy,
) -> Result<PartitionedSystem> {
    check_underdetermined(a.rows(), a.cols())?;
    let perm = match policy {
        PermutationPolicy::Identity => (0..a.cols()).collect(),
        PermutationPolicy::PivotColumns => pivot_columns(a)?,
    };
    PartitionedSystem::with_permutation(a, b, perm)
}

/// Row-by-row elimination choosing, for each row, the remaining column with
/// the largest eliminated entry. Columns whose original entry in that row is
/// nonzero are preferred, so the head block tends to keep a usable diagonal
/// for the Jacobi and Gauss-Seidel sub-steps.
fn pivot_columns(a: &DenseMatrix) -> Result<Vec<usize>> {
    let (m, n) = (a.rows(), a.cols());
    let tol = singularity_threshold(a);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut work = a.clone();

    for i in 0..m {
        let mut best: Option<(bool, f64, usize)> = None;
        for slot in i..n {
            let mag = work[(i, perm[slot])].abs();
            if mag <= tol {
                continue;
            }
            let keeps_diagonal = a[(i, perm[slot])].abs() > tol;
            let better = match best {
                None => true,
                Some((bd, bm, _)) => (keeps_diagonal, mag) > (bd, bm),
            };
            if better {
                best = Some((keeps_diagonal, mag, slot));
            }
        }
        let Some((_, _, slot)) = best else {
            return Err(Error::RankDeficient { rows: m });
        };
        perm.swap(i, slot);

        let pc = perm[i];
        let pivot = work[(i, pc)];
        for r in i + 1..m {
            let factor = work[(r, pc)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in 0..n {
                work[(r, c)] -= factor * work[(i, c)];
            }
        }
    }
    Ok(perm)
}

/// Joins a split iterate and returns it in the ORIGINAL column order.
pub fn assemble(x: &SplitIterate, perm: &[usize]) -> Result<Vector> {
    let n = perm.len();
    if x.len() != n {
        return Err(mismatch(format!(
            "split iterate has {} entries, permutation has {n}",
            x.len()
        )));
    }
    validate_permutation(perm, n)?;
    let mut out = vec![0.0; n];
    for (slot, value) in x.head.iter().chain(x.tail.iter()).enumerate() {
        out[perm[slot]] = *value;
    }
    Ok(Vector::from_vec_unchecked(out))
}

/// Splits an original-order vector into the head (first `m` slots of
/// `perm`) and tail.
pub fn disassemble(x: &[f64], perm: &[usize], m: usize) -> Result<SplitIterate> {
    let n = perm.len();
    if x.len() != n || m > n {
        return Err(mismatch(format!(
            "vector of length {} does not conform to permutation of {n} with head size {m}",
            x.len()
        )));
    }
    validate_permutation(perm, n)?;
    let permuted: Vec<f64> = perm.iter().map(|&p| x[p]).collect();
    Ok(SplitIterate {
        head: Vector::from_vec_unchecked(permuted[..m].to_vec()),
        tail: Vector::from_vec_unchecked(permuted[m..].to_vec()),
    })
}
