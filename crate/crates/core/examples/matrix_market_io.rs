// Reading and writing systems: Matrix Market, CSV and the JSON report.
//
// `cargo run --example matrix_market_io`

use std::error::Error;

use genjacobi::io::{
    read_matrix_market, read_report, write_matrix_market, write_report, MatrixMarketLayout,
};
use genjacobi::io::{load_matrix, save_matrix};
use genjacobi::{run, DenseMatrix, SolverConfig, Vector};

pub fn run_example() -> Result<bool, Box<dyn Error>> {
    let a = DenseMatrix::from_rows(&[[4.0, 0.0, 1.0, 0.1], [0.0, -5.0, 1e-9, 2.5]])?;

    let coord = write_matrix_market(&a, MatrixMarketLayout::Coordinate);
    print!("{coord}");
    let same_mm = read_matrix_market(&coord)? == a;

    let dir = std::env::temp_dir().join(format!("genjacobi-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("A.csv");
    save_matrix(&csv, &a)?;
    let same_csv = load_matrix(&csv)? == a;
    std::fs::remove_dir_all(&dir)?;

    let b = Vector::new(vec![1.0, 2.0])?;
    let report = run(&a, &b, &Vector::zeros(4), &SolverConfig::default())?;
    let json = write_report(&report);
    println!("{}", json.lines().take(8).collect::<Vec<_>>().join("\n"));
    let same_report = read_report(&json)? == report;

    println!("round trips: matrix market {same_mm}, csv {same_csv}, report {same_report}");
    Ok(same_mm && same_csv && same_report)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
