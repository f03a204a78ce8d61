// Generalized Jacobi on a generated system that satisfies the sufficient
// conditions, with the predicted contraction factor next to the observed
// one.
//
// `cargo run --example generalized_jacobi`

use std::error::Error;

use genjacobi::generate::{certified_system, seeded_rng};
use genjacobi::{
    check_conditions, contraction_factor, partition_system, run, Method, PermutationPolicy,
    SolveReport, SolverConfig, Splitting, Vector,
};

pub fn run_example() -> Result<(SolveReport, f64), Box<dyn Error>> {
    let g = certified_system(4, 10, &mut seeded_rng(42))?;
    let sys = partition_system(&g.a, &g.b, PermutationPolicy::Identity)?;
    let cond = check_conditions(&sys, Splitting::Jacobi)?;
    let q = contraction_factor(&cond, sys.m()).ok_or("system should be certified")?;
    for c in &cond.per_norm {
        println!("{:<10} c1 = {:.4}  c2 = {:.4}  certified: {}", c.norm.name(), c.c1, c.c2, c.certified);
    }

    let config = SolverConfig::with_method(Method::GeneralizedJacobi);
    let report = run(&g.a, &g.b, &Vector::zeros(g.a.cols()), &config)?;
    let r = &report.residual_norms;
    let worst = r.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    println!(
        "{} in {} iterations; largest 1-norm ratio {worst:.4}, bound {q:.4}",
        report.status, report.iterations
    );
    Ok((report, q))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
