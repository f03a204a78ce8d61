// Evaluating the sufficient conditions. An identity head certifies; a tail
// that is one shared column does not, although the iteration may still
// converge.
//
// `cargo run --example convergence_check`

use std::error::Error;

use genjacobi::{check_conditions, partition_system, DenseMatrix, PermutationPolicy, Splitting, Vector};

pub fn run_example() -> Result<Vec<bool>, Box<dyn Error>> {
    let systems = [
        ("disjoint tail", DenseMatrix::from_rows(&[[1.0, 0.0, 2.0, 0.0], [0.0, 1.0, 0.0, -3.0]])?),
        ("shared tail", DenseMatrix::from_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])?),
    ];
    let mut verdicts = Vec::new();
    for (name, a) in systems {
        let sys = partition_system(&a, &Vector::zeros(a.rows()), PermutationPolicy::Identity)?;
        for splitting in [Splitting::Jacobi, Splitting::GaussSeidel] {
            let report = check_conditions(&sys, splitting)?;
            println!("{name} / {splitting:?}:");
            for c in &report.per_norm {
                println!("  {:<10} c1 = {:.3}  c2 = {:.3}  (need c1 < 1, c2 < {})", c.norm.name(), c.c1, c.c2, sys.m());
            }
            verdicts.push(report.overall_certified);
        }
    }
    Ok(verdicts)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
