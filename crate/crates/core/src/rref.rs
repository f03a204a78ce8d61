//! Reduced row echelon form and the exact-solution pipeline built on it.
//!
//! Once `[A b]` is reduced to `[Ā b̄]`, the pivot columns of `Ā` form an
//! identity block. Using that block as the head of a generalized iteration
//! makes the head update solve its equations exactly, so every iterate after
//! the first satisfies `Ā x = b̄` up to rounding while the free (tail)
//! unknowns keep moving.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::iterate::{residual, run_partitioned, Method, SolveReport, SolverConfig, Status};
use crate::matrix::{norm_inf, DenseMatrix, NormKind, Vector};
use crate::partition::PartitionedSystem;

/// Relative pivot tolerance used by [`exact_solve`].
pub const DEFAULT_RREF_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RrefResult {
    pub matrix: DenseMatrix,
    pub rank: usize,
    /// Strictly increasing.
    pub pivot_columns: Vec<usize>,
    /// No pivot in the last column. Only meaningful when the input is an
    /// augmented matrix `[A b]`.
    pub consistent: bool,
}

/// Gauss-Jordan elimination with partial (row) pivoting.
///
/// While searching a column for a pivot, entries with magnitude at most
/// `tolerance · ‖M‖∞` (of the current working matrix) are set to exactly 0.
/// Pivots are set to exactly 1 and the rest of each pivot column to exactly
/// 0, so the result carries no elimination residue in those positions.
pub fn rref(a: &DenseMatrix, tolerance: f64) -> RrefResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;

    for c in 0..cols {
        if r == rows {
            break;
        }
        let cutoff = tolerance * w.norm(NormKind::Infinity);
        let mut best = r;
        for i in r..rows {
            if w[(i, c)].abs() <= cutoff {
                w[(i, c)] = 0.0;
            }
            if w[(i, c)].abs() > w[(best, c)].abs() {
                best = i;
            }
        }
        if w[(best, c)] == 0.0 {
            continue;
        }
        if best != r {
            for j in 0..cols {
                let tmp = w[(r, j)];
                w[(r, j)] = w[(best, j)];
                w[(best, j)] = tmp;
            }
        }

        let pivot = w[(r, c)];
        for j in c..cols {
            w[(r, j)] /= pivot;
        }
        w[(r, c)] = 1.0;

        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = w[(i, c)];
            if factor == 0.0 {
                continue;
            }
            for j in c..cols {
                w[(i, j)] -= factor * w[(r, j)];
            }
            w[(i, c)] = 0.0;
        }
        pivots.push(c);
        r += 1;
    }

    RrefResult {
        consistent: pivots.last() != Some(&(cols.saturating_sub(1))) || cols == 0,
        rank: pivots.len(),
        pivot_columns: pivots,
        matrix: w,
    }
}

/// Result of [`exact_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolveReport {
    /// RREF of the augmented matrix `[A b]`.
    pub rref: RrefResult,
    /// Number of nonzero rows kept from the RREF (the rank of `A`).
    pub effective_rows: usize,
    /// `Ā`: the nonzero rows of the reduced coefficient block.
    pub reduced_matrix: DenseMatrix,
    /// `b̄`: the matching entries of the reduced right-hand side.
    pub reduced_rhs: Vector,
    /// Driver report for the run on `(Ā, b̄)`; its residuals are measured
    /// against the reduced system.
    pub report: SolveReport,
    /// `‖A x - b‖` of the final iterate, in the configured residual norm.
    pub original_residual: f64,
}

/// Brings `[A b]` to RREF and runs a generalized method on the reduced
/// system with the pivot columns as the (identity) head block.
///
/// Zero rows of the RREF are dropped, so rank-deficient consistent systems
/// work with a smaller effective `m`. An inconsistent system yields a report
/// with `Status::Error(Inconsistent)` and no iterations.
pub fn exact_solve(
    a: &DenseMatrix,
    b: &Vector,
    x0: &Vector,
    config: &SolverConfig,
) -> Result<ExactSolveReport> {
    config.validate()?;
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || m >= n {
        return Err(Error::NotUnderdetermined { rows: m, cols: n });
    }
    if x0.len() != n {
        return Err(mismatch(format!(
            "initial guess has length {}, system has {n} unknowns",
            x0.len()
        )));
    }
    if !matches!(
        config.method,
        Method::GeneralizedJacobi | Method::GeneralizedGaussSeidel
    ) {
        return Err(Error::InvalidConfig(format!(
            "exact solve needs gjacobi or ggs, got {}",
            config.method
        )));
    }

    let reduced = rref(&a.augment(b)?, DEFAULT_RREF_TOLERANCE);
    let rank = reduced.rank.min(m);
    let reduced_matrix = reduced.matrix.submatrix(0..rank, 0..n)?;
    let reduced_rhs = reduced.matrix.column(n).as_slice()[..rank].to_vec();
    let reduced_rhs = Vector::new(reduced_rhs)?;
    let original_norm = |x: &Vector| -> Result<f64> {
        Ok(config.residual_norm.apply(&residual(a, b, x)?))
    };

    if !reduced.consistent || rank == 0 {
        let r0 = original_norm(x0)?;
        let status = if !reduced.consistent {
            Status::Error(Error::Inconsistent.kind())
        } else if r0 < config.epsilon {
            Status::Converged
        } else {
            // A = 0 and b = 0: every vector solves it, so this cannot happen
            // for a consistent system; keep the branch total anyway.
            Status::MaxIterations
        };
        let report = SolveReport {
            status,
            solution: x0.clone(),
            iterations: 0,
            residual_norms: vec![r0],
            config: *config,
            condition_diagnostics: None,
            column_perm: None,
        };
        return Ok(ExactSolveReport {
            effective_rows: rank,
            reduced_matrix,
            reduced_rhs,
            report,
            original_residual: r0,
            rref: reduced,
        });
    }

    let pivots = &reduced.pivot_columns;
    let perm: Vec<usize> = pivots
        .iter()
        .copied()
        .chain((0..n).filter(|j| !pivots.contains(j)))
        .collect();
    let sys = PartitionedSystem::with_permutation(&reduced_matrix, &reduced_rhs, perm)?;
    let report = run_partitioned(&sys, x0, config)?;
    let original_residual = original_norm(&report.solution)?;

    Ok(ExactSolveReport {
        effective_rows: rank,
        reduced_matrix,
        reduced_rhs,
        report,
        original_residual,
        rref: reduced,
    })
}

/// Relative exactness measure `‖Ā x - b̄‖∞ / (1 + ‖b̄‖∞)`.
pub fn relative_residual_inf(a: &DenseMatrix, b: &[f64], x: &[f64]) -> Result<f64> {
    Ok(norm_inf(&residual(a, b, x)?) / (1.0 + norm_inf(b)))
}

/// Serializable summary of an [`ExactSolveReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSolveSummary {
    pub effective_rows: usize,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    pub consistent: bool,
    pub rref: Vec<Vec<f64>>,
    pub original_residual: f64,
    pub report: SolveReport,
}

impl From<&ExactSolveReport> for ExactSolveSummary {
    fn from(r: &ExactSolveReport) -> Self {
        ExactSolveSummary {
            effective_rows: r.effective_rows,
            rank: r.rref.rank,
            pivot_columns: r.rref.pivot_columns.clone(),
            consistent: r.rref.consistent,
            rref: r.rref.matrix.to_rows(),
            original_residual: r.original_residual,
            report: r.report.clone(),
        }
    }
}
