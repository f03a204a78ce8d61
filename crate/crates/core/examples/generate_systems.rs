// Seeded test systems with a known solution, plain and certified.
//
// `cargo run --example generate_systems`

use std::error::Error;

use genjacobi::generate::{certified_system, random_system, seeded_rng, GeneratedSystem};

pub fn run_example() -> Result<(GeneratedSystem, GeneratedSystem), Box<dyn Error>> {
    let mut rng = seeded_rng(2024);
    let plain = random_system(3, 5, &mut rng)?;
    let certified = certified_system(3, 7, &mut rng)?;
    for (name, g) in [("random", &plain), ("certified", &certified)] {
        let r = g.a.mul_vec(&g.solution)?.sub(&g.b).norm_inf();
        println!("{name}: {}x{}, |A x* - b|_inf = {r:.1e}\n{}", g.a.rows(), g.a.cols(), g.a);
    }
    Ok((plain, certified))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
