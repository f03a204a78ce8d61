// The shipped 5x8 system: reduce `[A b]`, then one generalized Jacobi step
// on the reduced system lands on an exact solution with every component
// nonzero.
//
// `cargo run --example worked_example`

use std::error::Error;
use std::path::Path;

use genjacobi::io::{load_matrix, load_vector};
use genjacobi::{exact_solve, Method, SolverConfig, Vector};

pub fn run_example() -> Result<(Vector, f64), Box<dyn Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let a = load_matrix(&data.join("worked_A.mtx"))?;
    let b = load_vector(&data.join("worked_b.csv"))?;
    let x0 = load_vector(&data.join("worked_x0.csv"))?;

    let config = SolverConfig::with_method(Method::GeneralizedJacobi);
    let out = exact_solve(&a, &b, &x0, &config)?;

    println!("pivot columns {:?}, rank {}", out.rref.pivot_columns, out.rref.rank);
    println!("{}", out.rref.matrix);
    println!(
        "{} after {} iteration(s); |Ax - b|_1 = {:.3e}",
        out.report.status, out.report.iterations, out.original_residual
    );
    println!("x = {:?}", out.report.solution.as_slice());
    Ok((out.report.solution, out.original_residual))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
