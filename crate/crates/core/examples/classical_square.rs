// Classical Jacobi and Gauss-Seidel on a square diagonally dominant
// system, the building blocks of the head update.
//
// `cargo run --example classical_square`

use std::error::Error;

use genjacobi::{run, DenseMatrix, Method, SolverConfig, Vector};

/// Method, iteration count and final iterate.
pub type Outcome = (Method, usize, Vector);

pub fn run_example() -> Result<Vec<Outcome>, Box<dyn Error>> {
    let a = DenseMatrix::from_rows(&[[10.0, -1.0, 2.0], [-1.0, 11.0, -1.0], [2.0, -1.0, 10.0]])?;
    let b = Vector::new(vec![6.0, 25.0, -11.0])?;
    let mut out = Vec::new();
    for method in [Method::ClassicalJacobi, Method::ClassicalGaussSeidel] {
        let report = run(&a, &b, &Vector::zeros(3), &SolverConfig::with_method(method))?;
        println!("{:<3} {} in {} iterations: {:?}", method.name(), report.status, report.iterations, report.solution.as_slice());
        out.push((method, report.iterations, report.solution));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
