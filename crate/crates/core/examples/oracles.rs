//! Solver-independent inequality checks: monotonicity of `|x|^b x`, Young's
//! inequality, the Gronwall constant, interpolation and the product law.
//!
//! cargo run --release --example oracles

use nsd::oracles::{gronwall_constant, monotonicity_gap, verify, young_gap, SuiteSizes};

fn main() -> nsd::Result<()> {
    println!("monotonicity gap, x = (2,0,0), y = 0, beta = 1: {}", monotonicity_gap(&[2.0, 0.0, 0.0], &[0.0; 3], 1.0)?);
    println!("young gap, a = 1, b = 2, p = q = 2: {}", young_gap(1.0, 2.0, 2.0, 2.0)?);
    println!("C(alpha = 1, beta = 4) = {}", gronwall_constant(1.0, 4.0)?);

    let sizes = SuiteSizes { monotonicity: 20_000, young: 20_000, interpolation: 200, ..SuiteSizes::default() };
    for row in verify(sizes, 11) {
        println!("{row}");
    }
    Ok(())
}
