// Both generalized splittings from the same start. The Gauss-Seidel head
// sweep uses the lower triangle of `B` and usually needs fewer steps.
//
// `cargo run --example gauss_seidel_vs_jacobi`

use std::error::Error;

use genjacobi::generate::{certified_system, seeded_rng};
use genjacobi::{run, Method, SolverConfig, Vector};

pub fn run_example() -> Result<Vec<(Method, usize)>, Box<dyn Error>> {
    let g = certified_system(6, 15, &mut seeded_rng(7))?;
    let x0 = Vector::new(vec![1.0; g.a.cols()])?;
    let mut counts = Vec::new();
    for method in [Method::GeneralizedJacobi, Method::GeneralizedGaussSeidel] {
        let report = run(&g.a, &g.b, &x0, &SolverConfig::with_method(method))?;
        let err = report.solution.sub(&g.solution).norm_inf();
        println!(
            "{:<8} {:<10} {:>4} iterations, residual {:.2e}, distance to generating x* {err:.2e}",
            method.name(),
            report.status.to_string(),
            report.iterations,
            report.final_residual()
        );
        counts.push((method, report.iterations));
    }
    Ok(counts)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
