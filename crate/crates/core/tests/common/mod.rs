//! Test-only oracles and fixtures. Nothing here calls into the library's
//! numerical routines, so the checks built on it stay independent.

#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use genjacobi::{DenseMatrix, Vector};
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// `[A b]` of the 5x8 worked example.
pub const EXAMPLE_AUGMENTED: [[i64; 9]; 5] = [
    [2, 4, -3, 1, 0, 5, -7, 8, 38],
    [3, 2, 10, -4, -1, -6, 4, 1, 20],
    [9, 7, 3, 2, 0, 0, -4, 2, 39],
    [6, 4, 0, -1, -1, 3, 10, 5, -16],
    [5, 2, -3, -7, -5, 4, 8, -8, -30],
];

pub const EXAMPLE_X0: [f64; 8] = [2.0, 0.0, -1.0, 2.0, 0.0, 0.0, -3.0, 1.0];

/// The reduced matrix as printed alongside the example (one decimal).
pub const EXAMPLE_PRINTED_RREF: [[f64; 9]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.2, 5.7, 0.6, -20.5],
    [0.0, 1.0, 0.0, 0.0, 0.0, 0.6, -4.2, 2.0, 16.2],
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -4.0, 2.0, 9.1],
    [0.0, 0.0, 0.0, 1.0, 0.0, 3.0, 10.0, 5.0, 41.2],
    [0.0, 0.0, 0.0, 0.0, 1.0, 4.0, 8.0, -8.0, -83.1],
];

/// Printed result of the generalized Jacobi run.
pub const EXAMPLE_PRINTED_X: [f64; 8] = [
    2.9734, 2.2736, -4.0025, -2.9777, -1.9033, -1.5452, -3.9452, -0.7452,
];

/// Printed result of the baseline run, reported with residual 11.7462.
pub const EXAMPLE_PRINTED_Y: [f64; 8] = [2.0, 0.0, -1.0, -2.0, -1.3015, -1.3015, -4.3015, -0.3015];
pub const EXAMPLE_BASELINE_RESIDUAL: f64 = 11.7462;

pub fn example_a() -> DenseMatrix {
    let rows: Vec<Vec<f64>> = EXAMPLE_AUGMENTED
        .iter()
        .map(|r| r[..8].iter().map(|&v| v as f64).collect())
        .collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

pub fn example_b() -> Vector {
    Vector::new(EXAMPLE_AUGMENTED.iter().map(|r| r[8] as f64).collect()).unwrap()
}

pub fn vector(x: &[f64]) -> Vector {
    Vector::new(x.to_vec()).unwrap()
}

// ---------------------------------------------------------------------------
// exact rational Gauss-Jordan

pub struct RationalRref {
    pub matrix: Vec<Vec<BigRational>>,
    pub pivots: Vec<usize>,
}

impl RationalRref {
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|q| q.to_f64().unwrap()).collect())
            .collect()
    }
}

pub fn rational_rref(input: &[Vec<i64>]) -> RationalRref {
    let mut m: Vec<Vec<BigRational>> = input
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for j in 0..cols {
            m[r][j] = &m[r][j] / &pivot;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    RationalRref { matrix: m, pivots }
}

pub fn rational_abs_max(m: &[Vec<BigRational>]) -> f64 {
    m.iter()
        .flatten()
        .map(|q| q.abs().to_f64().unwrap())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// brute-force reimplementations

pub fn brute_sign_matrix(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = a.len();
    let n = a[0].len();
    let mut s = vec![vec![0.0; m]; n];
    for i in 0..m {
        for j in 0..n {
            s[j][i] = if a[i][j] > 0.0 {
                1.0
            } else if a[i][j] < 0.0 {
                -1.0
            } else {
                0.0
            };
        }
    }
    s
}

pub fn brute_row_norms(a: &[Vec<f64>]) -> Vec<f64> {
    a.iter()
        .map(|r| {
            let mut s = 0.0;
            for v in r {
                s += v.abs();
            }
            s
        })
        .collect()
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|r| {
            let mut s = 0.0;
            for (k, v) in r.iter().enumerate() {
                s += v * x[k];
            }
            s
        })
        .collect()
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = b[0].len();
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| {
                    let mut s = 0.0;
                    for (k, v) in r.iter().enumerate() {
                        s += v * b[k][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn eye(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn mat_sub(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

/// The baseline update written out with explicit matrices: `z + s(A) d`.
pub fn brute_baseline_step(a: &[Vec<f64>], b: &[f64], z: &[f64]) -> Vec<f64> {
    let m = a.len() as f64;
    let s = brute_sign_matrix(a);
    let norms = brute_row_norms(a);
    let az = matvec(a, z);
    let d: Vec<f64> = (0..a.len()).map(|i| (b[i] - az[i]) / (m * norms[i])).collect();
    let sd = matvec(&s, &d);
    z.iter().zip(&sd).map(|(x, y)| x + y).collect()
}

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(*v);
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .unwrap();
        m.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..=n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = m[i][n];
        for j in i + 1..n {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    x
}

/// Inverse by solving against every unit vector.
pub fn dense_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let e: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            dense_solve(a, &e)
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

pub fn diag_part(b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = b.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { b[i][j] } else { 0.0 }).collect())
        .collect()
}

pub fn lower_part(b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = b.len();
    (0..n)
        .map(|i| (0..n).map(|j| if j <= i { b[i][j] } else { 0.0 }).collect())
        .collect()
}

/// `x' = D⁻¹(rhs - R x)` with `R = B - D`, all formed explicitly.
pub fn brute_jacobi(b: &[Vec<f64>], rhs: &[f64], x: &[f64]) -> Vec<f64> {
    let d = diag_part(b);
    let r = mat_sub(b, &d);
    let rx = matvec(&r, x);
    let t: Vec<f64> = rhs.iter().zip(&rx).map(|(p, q)| p - q).collect();
    let dinv: Vec<Vec<f64>> = (0..b.len())
        .map(|i| (0..b.len()).map(|j| if i == j { 1.0 / b[i][i] } else { 0.0 }).collect())
        .collect();
    matvec(&dinv, &t)
}

/// `L x' = rhs - R x` with `R = B - L`, solved by general elimination.
pub fn brute_gauss_seidel(b: &[Vec<f64>], rhs: &[f64], x: &[f64]) -> Vec<f64> {
    let l = lower_part(b);
    let r = mat_sub(b, &l);
    let rx = matvec(&r, x);
    let t: Vec<f64> = rhs.iter().zip(&rx).map(|(p, q)| p - q).collect();
    dense_solve(&l, &t)
}

/// `(I - B S⁻¹)(I - (1/m) B̃ s(B̃) N(B̃)⁻¹)` from explicit matrices, with
/// `S = D` or `S = L`.
pub fn brute_residual_map(head: &[Vec<f64>], tail: &[Vec<f64>], gauss_seidel: bool) -> Vec<Vec<f64>> {
    let m = head.len();
    let split = if gauss_seidel { lower_part(head) } else { diag_part(head) };
    let s_inv = dense_inverse(&split);
    let left = mat_sub(&eye(m), &matmul(head, &s_inv));
    let signs = brute_sign_matrix(tail);
    let norms = brute_row_norms(tail);
    let n_inv: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 / norms[i] } else { 0.0 }).collect())
        .collect();
    let op = matmul(&matmul(tail, &signs), &n_inv);
    let scaled: Vec<Vec<f64>> = op.iter().map(|r| r.iter().map(|v| v / m as f64).collect()).collect();
    let right = mat_sub(&eye(m), &scaled);
    matmul(&left, &right)
}

// ---------------------------------------------------------------------------
// random inputs

pub fn uniform_rows(rng: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect()
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

pub fn to_matrix(rows: &[Vec<f64>]) -> DenseMatrix {
    DenseMatrix::from_rows(rows).unwrap()
}

pub fn split_columns(a: &[Vec<f64>], m: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let head = a.iter().map(|r| r[..m].to_vec()).collect();
    let tail = a.iter().map(|r| r[m..].to_vec()).collect();
    (head, tail)
}

/// Random `m x n` system whose identity partition satisfies the step
/// preconditions: nonzero tail rows and head diagonal entries of magnitude
/// at least `min_diag`.
pub fn random_partitionable(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    min_diag: f64,
) -> Vec<Vec<f64>> {
    loop {
        let a = uniform_rows(rng, m, n, -10.0, 10.0);
        let diag_ok = (0..m).all(|i| a[i][i].abs() >= min_diag);
        let tail_ok = a.iter().all(|r| r[m..].iter().any(|v| *v != 0.0));
        if diag_ok && tail_ok {
            return a;
        }
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Componentwise a-priori bound on the rounding error of a computed
/// residual `A x - b`: `γ_{n+1} (|A| |x| + |b|)`.
pub fn residual_rounding(a: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
    let gamma = (x.len() + 1) as f64 * f64::EPSILON;
    a.iter()
        .zip(b)
        .map(|(row, bi)| {
            let s: f64 = row.iter().zip(x).map(|(v, xj)| (v * xj).abs()).sum();
            gamma * (s + bi.abs()) * 1.01
        })
        .collect()
}
