//! Sufficient convergence conditions for the generalized iterations.
//!
//! One generalized step maps the residual `r = A x - b` to
//!
//! ```text
//! r' = (I - B S⁻¹) (I - (1/m) B̃ s(B̃) N(B̃)⁻¹) r
//! ```
//!
//! where `S` is `D = diag(B)` for Jacobi and `L = tril(B)` for Gauss-Seidel,
//! and `N(B̃)` is the diagonal of row 1-norms of the tail. The run contracts
//! whenever, in one submultiplicative norm,
//!
//! - `c1 = ‖I - B S⁻¹‖ < 1`, and
//! - `c2 = ‖m I - B̃ s(B̃) N(B̃)⁻¹‖ < m`.
//!
//! Both conditions are sufficient only; an uncertified system may still
//! converge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    forward_substitution, sign_matrix, singularity_threshold, solve_row_lower, DenseMatrix,
    NormKind, Vector,
};
use crate::partition::PartitionedSystem;

/// Which square splitting drives the head update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Splitting {
    #[serde(rename = "gjacobi")]
    Jacobi,
    #[serde(rename = "ggs")]
    GaussSeidel,
}

/// Condition values measured in a single norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormCondition {
    pub norm: NormKind,
    pub c1: f64,
    pub c2: f64,
    pub certified: bool,
    /// `‖S⁻¹ (I - (1/m) B̃ s N⁻¹)‖ + (1/m) ‖s N⁻¹‖`, the factor bounding
    /// `‖x' - x‖` by the residual. Informational only.
    pub cauchy_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub method: Splitting,
    /// Number of equations `m`.
    pub rows: usize,
    pub per_norm: Vec<NormCondition>,
    pub overall_certified: bool,
}

impl ConditionReport {
    pub fn get(&self, norm: NormKind) -> Option<&NormCondition> {
        self.per_norm.iter().find(|c| c.norm == norm)
    }

    pub fn certified_norms(&self) -> impl Iterator<Item = &NormCondition> {
        self.per_norm.iter().filter(|c| c.certified)
    }
}

/// The matrices every norm is evaluated on.
struct ConditionMatrices {
    /// `I - B S⁻¹`
    head_gap: DenseMatrix,
    /// `m I - B̃ s(B̃) N(B̃)⁻¹`
    tail_gap: DenseMatrix,
    /// `S⁻¹ (I - (1/m) B̃ s N⁻¹)`
    head_increment: DenseMatrix,
    /// `(1/m) s(B̃) N(B̃)⁻¹`
    tail_increment: DenseMatrix,
}

fn tail_inverse_norms(tail: &DenseMatrix) -> Result<Vec<f64>> {
    (0..tail.rows())
        .map(|i| {
            let n: f64 = tail.row(i).iter().map(|v| v.abs()).sum();
            if n == 0.0 {
                Err(Error::ZeroTailRow { row: i })
            } else {
                Ok(1.0 / n)
            }
        })
        .collect()
}

/// `B̃ s(B̃) N(B̃)⁻¹`, the `m x m` operator the tail update applies to the
/// residual (scaled by `1/m`).
pub fn tail_operator(sys: &PartitionedSystem) -> Result<DenseMatrix> {
    let inv = tail_inverse_norms(sys.tail())?;
    let signs = sign_matrix(sys.tail()).scale_columns(&inv);
    sys.tail().mul_mat(&signs)
}

fn build(sys: &PartitionedSystem, method: Splitting) -> Result<ConditionMatrices> {
    let m = sys.m();
    let head = sys.head();
    let inv_norms = tail_inverse_norms(sys.tail())?;
    let scaled_signs = sign_matrix(sys.tail()).scale_columns(&inv_norms);
    let operator = sys.tail().mul_mat(&scaled_signs)?;
    let identity = DenseMatrix::identity(m);

    let tail_gap = identity.scale(m as f64).sub(&operator)?;
    let projector = identity.sub(&operator.scale(1.0 / m as f64))?;

    let (head_gap, head_increment) = match method {
        Splitting::Jacobi => {
            let tol = singularity_threshold(head);
            let diag = head.diagonal();
            if let Some(index) = diag.iter().position(|d| d.abs() <= tol) {
                return Err(Error::ZeroDiagonal { index });
            }
            let inv: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
            (
                identity.sub(&head.scale_columns(&inv))?,
                projector.scale_rows(&inv),
            )
        }
        Splitting::GaussSeidel => {
            let lower = head.lower_triangle();
            // B L⁻¹ row by row: each row y solves y L = B_i.
            let mut b_linv = DenseMatrix::zeros(m, m);
            for i in 0..m {
                let y = solve_row_lower(&lower, head.row(i))?;
                for (j, v) in y.iter().enumerate() {
                    b_linv[(i, j)] = *v;
                }
            }
            // L⁻¹ P column by column.
            let mut linv_p = DenseMatrix::zeros(m, m);
            for j in 0..m {
                let col = forward_substitution(&lower, &projector.column(j))?;
                for (i, v) in col.iter().enumerate() {
                    linv_p[(i, j)] = *v;
                }
            }
            (identity.sub(&b_linv)?, linv_p)
        }
    };

    Ok(ConditionMatrices {
        head_gap,
        tail_gap,
        head_increment,
        tail_increment: scaled_signs.scale(1.0 / m as f64),
    })
}

/// Evaluates both sufficient conditions in the 1-, infinity- and Frobenius
/// norms. A norm certifies only if both hold in that same norm.
pub fn check_conditions(sys: &PartitionedSystem, method: Splitting) -> Result<ConditionReport> {
    let m = sys.m();
    let mats = build(sys, method)?;
    let per_norm: Vec<NormCondition> = NormKind::ALL
        .into_iter()
        .map(|norm| {
            let c1 = mats.head_gap.norm(norm);
            let c2 = mats.tail_gap.norm(norm);
            NormCondition {
                norm,
                c1,
                c2,
                certified: c1 < 1.0 && c2 < m as f64,
                cauchy_bound: mats.head_increment.norm(norm) + mats.tail_increment.norm(norm),
            }
        })
        .collect();
    Ok(ConditionReport {
        method,
        rows: m,
        overall_certified: per_norm.iter().any(|c| c.certified),
        per_norm,
    })
}

/// Smallest `c1 · c2 / m` over the certified norms, if any. This bounds the
/// per-step residual ratio in that norm.
pub fn contraction_factor(report: &ConditionReport, m: usize) -> Option<f64> {
    report
        .certified_norms()
        .map(|c| c.c1 * c.c2 / m as f64)
        .min_by(f64::total_cmp)
}

/// The residual map of one generalized step as an explicit matrix,
/// `(I - B S⁻¹)(I - (1/m) B̃ s(B̃) N(B̃)⁻¹)`.
pub fn residual_map(sys: &PartitionedSystem, method: Splitting) -> Result<DenseMatrix> {
    let m = sys.m() as f64;
    let mats = build(sys, method)?;
    let projector = mats.tail_gap.scale(1.0 / m);
    mats.head_gap.mul_mat(&projector)
}

/// Applies [`residual_map`] to a residual vector.
pub fn predicted_residual(sys: &PartitionedSystem, method: Splitting, r: &[f64]) -> Result<Vector> {
    residual_map(sys, method)?.mul_vec(r)
}
