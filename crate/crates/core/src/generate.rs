//! Random test systems with a known solution.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convergence::{check_conditions, Splitting};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Vector};
use crate::partition::{partition_system, PermutationPolicy};

/// Upper limit on how often the coupling part of the tail is halved before
/// a candidate is thrown away.
pub const MAX_HALVINGS: usize = 60;
const MAX_RESAMPLES: usize = 20;

/// `A x* = b` with `x*` drawn uniformly from `[-1, 1]^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSystem {
    pub a: DenseMatrix,
    pub b: Vector,
    pub solution: Vector,
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn finish(a: DenseMatrix, rng: &mut impl Rng) -> GeneratedSystem {
    let solution = Vector::from_vec_unchecked((0..a.cols()).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    let b = a.mul_vec(&solution).expect("shapes agree by construction");
    GeneratedSystem { a, b, solution }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || rows >= cols {
        return Err(Error::NotUnderdetermined { rows, cols });
    }
    Ok(())
}

/// Dense system with entries uniform in `[-10, 10]`.
pub fn random_system(rows: usize, cols: usize, rng: &mut impl Rng) -> Result<GeneratedSystem> {
    check_shape(rows, cols)?;
    let a = DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-10.0..=10.0));
    Ok(finish(a, rng))
}

/// A system whose identity partition satisfies the sufficient convergence
/// conditions of both generalized methods in at least one norm each.
///
/// The head block is strictly diagonally dominant. Each tail row owns one
/// column no other row touches; the remaining tail columns carry a dense
/// coupling term that is halved until both condition checks certify. Tail
/// scale alone cannot help here because `B̃ s(B̃) N(B̃)⁻¹` is invariant under
/// scaling `B̃`, so the construction needs `cols >= 2 * rows`.
pub fn certified_system(rows: usize, cols: usize, rng: &mut impl Rng) -> Result<GeneratedSystem> {
    check_shape(rows, cols)?;
    if cols < 2 * rows {
        return Err(Error::InvalidConfig(format!(
            "certified generation needs cols >= 2 * rows, got {rows}x{cols}"
        )));
    }
    let m = rows;
    let extra = cols - 2 * m;

    for _ in 0..MAX_RESAMPLES {
        let head = DenseMatrix::from_fn(m, m, |i, j| {
            if i == j {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * (2.0 * m as f64 + rng.gen_range(0.0..1.0))
            } else {
                rng.gen_range(-1.0..=1.0)
            }
        });
        let own = DenseMatrix::from_fn(m, m, |i, j| {
            if i == j {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * rng.gen_range(1.0..=2.0)
            } else {
                0.0
            }
        });
        let coupling = DenseMatrix::from_fn(m, extra, |_, _| rng.gen_range(-1.0..=1.0));

        let mut scale = 1.0;
        for _ in 0..=MAX_HALVINGS {
            let a = DenseMatrix::from_fn(m, cols, |i, j| {
                if j < m {
                    head[(i, j)]
                } else if j < 2 * m {
                    own[(i, j - m)]
                } else {
                    scale * coupling[(i, j - 2 * m)]
                }
            });
            if is_certified(&a)? {
                return Ok(finish(a, rng));
            }
            scale *= 0.5;
        }
    }
    Err(Error::InvalidConfig(format!(
        "could not certify a {rows}x{cols} system"
    )))
}

fn is_certified(a: &DenseMatrix) -> Result<bool> {
    let sys = partition_system(a, &Vector::zeros(a.rows()), PermutationPolicy::Identity)?;
    for splitting in [Splitting::Jacobi, Splitting::GaussSeidel] {
        if !check_conditions(&sys, splitting)?.overall_certified {
            return Ok(false);
        }
    }
    Ok(true)
}
