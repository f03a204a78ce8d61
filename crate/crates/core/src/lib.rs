//! Stationary iterations for underdetermined linear systems `A x = b`
//! (`m` equations, `n > m` unknowns).
//!
//! The crate provides
//!
//! - the sign-matrix iteration `z' = z + s(A) d` ([`iterate::baseline_step`]),
//! - generalized Jacobi and Gauss-Seidel iterations that split
//!   `A = [B B̃]` and combine a sign-matrix update of the tail unknowns with a
//!   classical sweep on the square head ([`iterate::generalized_jacobi_step`],
//!   [`iterate::generalized_gauss_seidel_step`]),
//! - a checker for the sufficient convergence conditions of those
//!   iterations ([`convergence::check_conditions`]),
//! - an exact-solution pipeline that reduces `[A b]` to row echelon form
//!   first, after which every iterate solves the system
//!   ([`rref::exact_solve`]),
//! - Matrix Market / CSV readers and writers and a JSON report format
//!   ([`io`]), random test systems ([`generate`]) and the `genjacobi`
//!   command line ([`cli`]).
//!
//! ```
//! use genjacobi::{run, DenseMatrix, Method, SolverConfig, Status, Vector};
//!
//! let a = DenseMatrix::from_rows(&[[4.0, 1.0, 1.0, 0.0], [1.0, 4.0, 0.0, 1.0]]).unwrap();
//! let b = Vector::new(vec![2.0, 3.0]).unwrap();
//! let config = SolverConfig::with_method(Method::GeneralizedJacobi);
//! let report = run(&a, &b, &Vector::zeros(4), &config).unwrap();
//! assert_eq!(report.status, Status::Converged);
//! ```

pub mod cli;
pub mod convergence;
pub mod error;
pub mod generate;
pub mod io;
pub mod iterate;
pub mod matrix;
pub mod partition;
pub mod rref;

pub use convergence::{check_conditions, contraction_factor, ConditionReport, NormCondition, Splitting};
pub use error::{Error, ErrorKind, Result};
pub use iterate::{
    baseline_step, classical_gauss_seidel_step, classical_jacobi_step, generalized_gauss_seidel_step,
    generalized_jacobi_step, run, run_partitioned, IterateState, Method, ResidualNorm, SolveReport,
    SolverConfig, Status,
};
pub use matrix::{
    forward_substitution, matrix_norm, row_one_norms, sign_matrix, DenseMatrix, NormKind, Vector,
};
pub use partition::{
    assemble, disassemble, partition_system, PartitionedSystem, PermutationPolicy, SplitIterate,
};
pub use rref::{exact_solve, rref, ExactSolveReport, RrefResult};
