//! The stationary iterations and the driver that runs them.
//!
//! Three methods target underdetermined systems (`m < n`):
//!
//! - **Baseline**: `z' = z + s(A) d`, with `d_i = (b_i - A_i z) / (m ‖A_i‖₁)`.
//! - **Generalized Jacobi / Gauss-Seidel**: for `A = [B B̃]` and
//!   `x = (x₁, x₂)`, first move the tail with the baseline update applied to
//!   `B̃ y = b - B x₁`, then update the head with one Jacobi (or Gauss-Seidel)
//!   sweep on `B z = b - B̃ x₂'`, using the freshly updated tail.
//!
//! The classical square Jacobi and Gauss-Seidel sweeps are exposed as well,
//! both as the head sub-step and as methods in their own right for `m = n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::convergence::{check_conditions, ConditionReport, Splitting};
use crate::error::{mismatch, Error, ErrorKind, Result};
use crate::matrix::{
    forward_substitution, norm_inf, norm_one, row_one_norms, singularity_threshold, DenseMatrix,
    Vector,
};
use crate::partition::{assemble, disassemble, partition_system, PartitionedSystem, PermutationPolicy, SplitIterate};

/// Relative residual change below which an iteration counts as stalled.
pub const STAGNATION_TOLERANCE: f64 = 1e-14;
/// Growth of the residual over its initial value that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "baseline")]
    Baseline,
    #[serde(rename = "gjacobi")]
    GeneralizedJacobi,
    #[serde(rename = "ggs")]
    GeneralizedGaussSeidel,
    #[serde(rename = "jacobi")]
    ClassicalJacobi,
    #[serde(rename = "gs")]
    ClassicalGaussSeidel,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Baseline,
        Method::GeneralizedJacobi,
        Method::GeneralizedGaussSeidel,
        Method::ClassicalJacobi,
        Method::ClassicalGaussSeidel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::GeneralizedJacobi => "gjacobi",
            Method::GeneralizedGaussSeidel => "ggs",
            Method::ClassicalJacobi => "jacobi",
            Method::ClassicalGaussSeidel => "gs",
        }
    }

    /// True for the methods that need `m < n`.
    pub fn is_underdetermined(self) -> bool {
        matches!(
            self,
            Method::Baseline | Method::GeneralizedJacobi | Method::GeneralizedGaussSeidel
        )
    }

    /// The head-block splitting of a generalized method.
    pub fn splitting(self) -> Option<Splitting> {
        match self {
            Method::GeneralizedJacobi => Some(Splitting::Jacobi),
            Method::GeneralizedGaussSeidel => Some(Splitting::GaussSeidel),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown method '{s}' (expected one of baseline, gjacobi, ggs, jacobi, gs)"
                ))
            })
    }
}

/// Vector norm used for the stopping test `‖Ax - b‖ < ε`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidualNorm {
    #[default]
    #[serde(rename = "one")]
    One,
    #[serde(rename = "inf")]
    Infinity,
}

impl ResidualNorm {
    pub fn apply(self, v: &[f64]) -> f64 {
        match self {
            ResidualNorm::One => norm_one(v),
            ResidualNorm::Infinity => norm_inf(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    /// Residual-norm threshold.
    pub epsilon: f64,
    pub max_iterations: usize,
    pub residual_norm: ResidualNorm,
    pub permutation_policy: PermutationPolicy,
    /// Number of trailing residuals that must agree to within
    /// [`STAGNATION_TOLERANCE`] before the run is declared stagnated.
    pub stagnation_window: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: Method::GeneralizedJacobi,
            epsilon: 1e-8,
            max_iterations: 10_000,
            residual_norm: ResidualNorm::One,
            permutation_policy: PermutationPolicy::Identity,
            stagnation_window: 10,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        SolverConfig {
            method,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.stagnation_window < 2 {
            return Err(Error::InvalidConfig("stagnation_window must be at least 2".into()));
        }
        Ok(())
    }
}

/// The driver's running state. Residuals are recorded for the initial guess
/// and after every completed iteration, so `residual_norms.len() == k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    x: Vector,
    k: usize,
    residual_norms: Vec<f64>,
}

impl IterateState {
    pub fn new(x0: Vector, initial_residual: f64) -> Self {
        IterateState {
            x: x0,
            k: 0,
            residual_norms: vec![initial_residual],
        }
    }

    pub fn advance(&mut self, x: Vector, residual: f64) {
        self.x = x;
        self.k += 1;
        self.residual_norms.push(residual);
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn residual_norms(&self) -> &[f64] {
        &self.residual_norms
    }

    pub fn last_residual(&self) -> f64 {
        *self.residual_norms.last().expect("history is never empty")
    }

    fn is_stagnated(&self, window: usize) -> bool {
        let r = &self.residual_norms;
        r.len() >= window
            && r[r.len() - window..]
                .windows(2)
                .all(|w| (w[1] - w[0]).abs() < STAGNATION_TOLERANCE * w[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterations,
    Stagnated,
    Diverged,
    Error(ErrorKind),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Converged => f.write_str("converged"),
            Status::MaxIterations => f.write_str("max_iterations"),
            Status::Stagnated => f.write_str("stagnated"),
            Status::Diverged => f.write_str("diverged"),
            Status::Error(kind) => write!(
                f,
                "error ({})",
                serde_json::to_value(kind)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default()
            ),
        }
    }
}

/// Outcome of a [`run`]. `solution` is always in the original column order
/// and `residual_norms` always refer to the system the caller passed in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Status,
    pub solution: Vector,
    pub iterations: usize,
    #[serde(deserialize_with = "lenient_floats")]
    pub residual_norms: Vec<f64>,
    pub config: SolverConfig,
    pub condition_diagnostics: Option<ConditionReport>,
    /// Column permutation used to build the head block (generalized methods).
    pub column_perm: Option<Vec<usize>>,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residual_norms.last().copied().unwrap_or(f64::NAN)
    }
}

fn lenient_floats<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    let raw: Vec<Option<f64>> = Vec::deserialize(d)?;
    Ok(raw.into_iter().map(|v| v.unwrap_or(f64::INFINITY)).collect())
}

/// `A x - b`.
pub fn residual(a: &DenseMatrix, b: &[f64], x: &[f64]) -> Result<Vector> {
    if b.len() != a.rows() {
        return Err(mismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let ax = a.mul_vec(x)?;
    Ok(Vector::from_vec_unchecked(
        ax.iter().zip(b).map(|(l, r)| l - r).collect(),
    ))
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

/// `z + s(M) d` for `d_i = r_i / (divisor · ‖M_i‖₁)`, with `r` the residual
/// `rhs - M z`.
fn sign_correction(
    mat: &DenseMatrix,
    rhs: &[f64],
    z: &[f64],
    divisor: f64,
    zero_row: impl Fn(usize) -> Error,
) -> Result<Vector> {
    let weights = weighted_residuals(mat, rhs, z, divisor, zero_row)?;
    let mut out = z.to_vec();
    for (i, di) in weights.iter().enumerate() {
        if *di == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += sign(mat[(i, j)]) * di;
        }
    }
    Ok(Vector::from_vec_unchecked(out))
}

fn weighted_residuals(
    mat: &DenseMatrix,
    rhs: &[f64],
    z: &[f64],
    divisor: f64,
    zero_row: impl Fn(usize) -> Error,
) -> Result<Vector> {
    let norms = row_one_norms(mat);
    if let Some(row) = norms.iter().position(|n| *n == 0.0) {
        return Err(zero_row(row));
    }
    let mz = mat.mul_vec(z)?;
    Ok(Vector::from_vec_unchecked(
        (0..mat.rows())
            .map(|i| (rhs[i] - mz[i]) / (divisor * norms[i]))
            .collect(),
    ))
}

/// One step of the baseline sign-matrix iteration on `A z = b`.
pub fn baseline_step(a: &DenseMatrix, b: &[f64], z: &[f64]) -> Result<Vector> {
    if b.len() != a.rows() || z.len() != a.cols() {
        return Err(mismatch(format!(
            "baseline step on {}x{} matrix with rhs of length {} and iterate of length {}",
            a.rows(),
            a.cols(),
            b.len(),
            z.len()
        )));
    }
    sign_correction(a, b, z, a.rows() as f64, |row| Error::ZeroRow { row })
}

fn check_split(sys: &PartitionedSystem, x: &SplitIterate) -> Result<()> {
    if x.head.len() != sys.m() || x.tail.len() != sys.n() - sys.m() {
        return Err(mismatch(format!(
            "split iterate ({}, {}) does not conform to a {}x{} partition",
            x.head.len(),
            x.tail.len(),
            sys.m(),
            sys.n()
        )));
    }
    Ok(())
}

/// `b̃ = b - B x₁`.
fn tail_rhs(sys: &PartitionedSystem, x: &SplitIterate) -> Result<Vector> {
    let bx = sys.head().mul_vec(&x.head)?;
    Ok(sys.rhs().sub(&bx))
}

/// The step-length vector `d` of the tail update:
/// `d_i = (b̃_i - B̃_i x₂) / (m ‖B̃_i‖₁)` with `b̃ = b - B x₁`.
pub fn weighted_residual(sys: &PartitionedSystem, x: &SplitIterate) -> Result<Vector> {
    check_split(sys, x)?;
    let rhs = tail_rhs(sys, x)?;
    weighted_residuals(sys.tail(), &rhs, &x.tail, sys.m() as f64, |row| {
        Error::ZeroTailRow { row }
    })
}

/// Step 1, shared by both generalized methods: the baseline update applied
/// to `B̃ y = b - B x₁` starting from `x₂`.
fn tail_step(sys: &PartitionedSystem, x: &SplitIterate) -> Result<Vector> {
    check_split(sys, x)?;
    let rhs = tail_rhs(sys, x)?;
    sign_correction(sys.tail(), &rhs, &x.tail, sys.m() as f64, |row| {
        Error::ZeroTailRow { row }
    })
}

/// `b̂ = b - B̃ x₂'` with the already updated tail.
fn head_rhs(sys: &PartitionedSystem, new_tail: &Vector) -> Result<Vector> {
    Ok(sys.rhs().sub(&sys.tail().mul_vec(new_tail)?))
}

pub fn generalized_jacobi_step(sys: &PartitionedSystem, x: &SplitIterate) -> Result<SplitIterate> {
    let tail = tail_step(sys, x)?;
    let rhs = head_rhs(sys, &tail)?;
    let head = classical_jacobi_step(sys.head(), &rhs, &x.head)?;
    Ok(SplitIterate { head, tail })
}

pub fn generalized_gauss_seidel_step(
    sys: &PartitionedSystem,
    x: &SplitIterate,
) -> Result<SplitIterate> {
    let tail = tail_step(sys, x)?;
    let rhs = head_rhs(sys, &tail)?;
    let head = classical_gauss_seidel_step(sys.head(), &rhs, &x.head)?;
    Ok(SplitIterate { head, tail })
}

fn check_square(b_mat: &DenseMatrix, rhs: &[f64], x: &[f64]) -> Result<()> {
    if !b_mat.is_square() {
        return Err(Error::NotSquare {
            rows: b_mat.rows(),
            cols: b_mat.cols(),
        });
    }
    if rhs.len() != b_mat.rows() || x.len() != b_mat.rows() {
        return Err(mismatch(format!(
            "{}x{} matrix with rhs of length {} and iterate of length {}",
            b_mat.rows(),
            b_mat.cols(),
            rhs.len(),
            x.len()
        )));
    }
    Ok(())
}

/// `x' = D⁻¹(rhs - (B - D) x)`.
pub fn classical_jacobi_step(b_mat: &DenseMatrix, rhs: &[f64], x: &[f64]) -> Result<Vector> {
    check_square(b_mat, rhs, x)?;
    let tol = singularity_threshold(b_mat);
    let m = b_mat.rows();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let diag = b_mat[(i, i)];
        if diag.abs() <= tol {
            return Err(Error::ZeroDiagonal { index: i });
        }
        let off: f64 = b_mat
            .row(i)
            .iter()
            .zip(x)
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (a, v))| a * v)
            .sum();
        out.push((rhs[i] - off) / diag);
    }
    Ok(Vector::from_vec_unchecked(out))
}

/// Solves `L x' = rhs - (B - L) x` with `L` the lower triangle of `B`.
pub fn classical_gauss_seidel_step(b_mat: &DenseMatrix, rhs: &[f64], x: &[f64]) -> Result<Vector> {
    check_square(b_mat, rhs, x)?;
    let m = b_mat.rows();
    let shifted: Vec<f64> = (0..m)
        .map(|i| {
            let upper: f64 = (i + 1..m).map(|j| b_mat[(i, j)] * x[j]).sum();
            rhs[i] - upper
        })
        .collect();
    forward_substitution(b_mat, &shifted)
}

enum Kernel<'a> {
    Baseline {
        a: &'a DenseMatrix,
        b: &'a Vector,
    },
    Classical {
        a: &'a DenseMatrix,
        b: &'a Vector,
        gauss_seidel: bool,
    },
    Generalized {
        sys: &'a PartitionedSystem,
        gauss_seidel: bool,
    },
}

impl Kernel<'_> {
    /// Advances an original-order iterate by one step.
    fn step(&self, x: &Vector) -> Result<Vector> {
        match self {
            Kernel::Baseline { a, b } => baseline_step(a, b, x),
            Kernel::Classical {
                a,
                b,
                gauss_seidel: false,
            } => classical_jacobi_step(a, b, x),
            Kernel::Classical {
                a,
                b,
                gauss_seidel: true,
            } => classical_gauss_seidel_step(a, b, x),
            Kernel::Generalized { sys, gauss_seidel } => {
                let split = disassemble(x, sys.column_perm(), sys.m())?;
                let next = if *gauss_seidel {
                    generalized_gauss_seidel_step(sys, &split)?
                } else {
                    generalized_jacobi_step(sys, &split)?
                };
                assemble(&next, sys.column_perm())
            }
        }
    }
}

fn check_x0(x0: &Vector, n: usize) -> Result<()> {
    if x0.len() != n {
        return Err(mismatch(format!(
            "initial guess has length {}, system has {n} unknowns",
            x0.len()
        )));
    }
    Ok(())
}

/// Runs `config.method` on `A x = b` from `x0`.
///
/// Shape and configuration problems are returned as `Err` before any
/// iteration happens. Failures inside a step end the run with
/// `Status::Error` and the last good iterate.
pub fn run(a: &DenseMatrix, b: &Vector, x0: &Vector, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(mismatch(format!(
            "right-hand side has length {}, matrix has {m} rows",
            b.len()
        )));
    }
    check_x0(x0, n)?;

    match config.method {
        Method::Baseline => {
            if m == 0 || m >= n {
                return Err(Error::NotUnderdetermined { rows: m, cols: n });
            }
            Ok(drive(&Kernel::Baseline { a, b }, a, b, x0, config, None, None))
        }
        Method::ClassicalJacobi | Method::ClassicalGaussSeidel => {
            if m != n {
                return Err(Error::NotSquare { rows: m, cols: n });
            }
            let kernel = Kernel::Classical {
                a,
                b,
                gauss_seidel: config.method == Method::ClassicalGaussSeidel,
            };
            Ok(drive(&kernel, a, b, x0, config, None, None))
        }
        Method::GeneralizedJacobi | Method::GeneralizedGaussSeidel => {
            let sys = partition_system(a, b, config.permutation_policy)?;
            run_partitioned(&sys, x0, config)
        }
    }
}

/// Runs a generalized method on an already partitioned system. `x0` and the
/// reported solution are in the original column order.
pub fn run_partitioned(
    sys: &PartitionedSystem,
    x0: &Vector,
    config: &SolverConfig,
) -> Result<SolveReport> {
    config.validate()?;
    check_x0(x0, sys.n())?;
    let Some(splitting) = config.method.splitting() else {
        return Err(Error::InvalidConfig(format!(
            "{} is not a generalized method",
            config.method
        )));
    };
    let kernel = Kernel::Generalized {
        sys,
        gauss_seidel: splitting == Splitting::GaussSeidel,
    };
    let diagnostics = check_conditions(sys, splitting).ok();
    let a = sys.original_matrix();
    Ok(drive(
        &kernel,
        &a,
        sys.rhs(),
        x0,
        config,
        diagnostics,
        Some(sys.column_perm().to_vec()),
    ))
}

fn drive(
    kernel: &Kernel<'_>,
    a: &DenseMatrix,
    b: &Vector,
    x0: &Vector,
    config: &SolverConfig,
    condition_diagnostics: Option<ConditionReport>,
    column_perm: Option<Vec<usize>>,
) -> SolveReport {
    let norm_of = |x: &Vector| -> f64 {
        residual(a, b, x)
            .map(|r| config.residual_norm.apply(&r))
            .unwrap_or(f64::NAN)
    };

    let r0 = norm_of(x0);
    let mut state = IterateState::new(x0.clone(), r0);
    let finish = |state: IterateState, status: Status| SolveReport {
        status,
        iterations: state.k,
        solution: state.x,
        residual_norms: state.residual_norms,
        config: *config,
        condition_diagnostics: condition_diagnostics.clone(),
        column_perm: column_perm.clone(),
    };

    if !r0.is_finite() {
        return finish(state, Status::Diverged);
    }
    if r0 < config.epsilon {
        return finish(state, Status::Converged);
    }

    while state.k < config.max_iterations {
        let next = match kernel.step(state.x()) {
            Ok(next) => next,
            Err(e) => return finish(state, Status::Error(e.kind())),
        };
        let r = norm_of(&next);
        state.advance(next, r);

        if !r.is_finite() || r > DIVERGENCE_FACTOR * r0 {
            return finish(state, Status::Diverged);
        }
        if r < config.epsilon {
            return finish(state, Status::Converged);
        }
        if state.is_stagnated(config.stagnation_window) {
            return finish(state, Status::Stagnated);
        }
    }
    finish(state, Status::MaxIterations)
}
