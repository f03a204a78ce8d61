// The sign-matrix iteration `z' = z + s(A) d` one step at a time.
//
// `cargo run --example baseline_iteration`

use std::error::Error;

use genjacobi::iterate::residual;
use genjacobi::{baseline_step, sign_matrix, DenseMatrix, Vector};

pub fn run_example() -> Result<Vec<f64>, Box<dyn Error>> {
    let a = DenseMatrix::from_rows(&[[3.0, 1.0, 0.0, 1.0], [0.0, -2.0, 4.0, 1.0]])?;
    let b = Vector::new(vec![5.0, 3.0])?;
    println!("s(A) =\n{}", sign_matrix(&a));

    let mut z = Vector::zeros(4);
    let mut history = vec![residual(&a, &b, &z)?.norm_one()];
    for k in 1..=40 {
        z = baseline_step(&a, &b, &z)?;
        let r = residual(&a, &b, &z)?.norm_one();
        history.push(r);
        if k % 10 == 0 {
            println!("k = {k:>2}  |Az - b|_1 = {r:.3e}");
        }
    }
    println!("z = {:?}", z.as_slice());
    Ok(history)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
