//! Solving the translation-invariant boundary-field equation
//! h^2 = ((theta h^2 + 1)/(h^2 + theta))^k on trees of order 2 and 3.
//!
//! Run with: cargo run --example solve_ti

use padic_ising::ti::{self, Coupling, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [7u64, 5, 13] {
        println!(
            "== p = {} (p mod 4 = {}, p mod 12 = {}) ==",
            p,
            p % 4,
            p % 12
        );
        let coupling = Coupling::canonical(p);

        // order three: the full catalog z = 1, -1, z_3, z_4
        let params = ModelParams::new(p, coupling, 3)?;
        let sols = ti::solve_k3(&params)?;
        println!(
            "order 3: {} solutions, measure count {} after identifying h with -h",
            sols.solution_count(),
            sols.measure_count()
        );
        for (i, h) in sols.h_roots().iter().enumerate() {
            let residual = ti::residual_norm(h, &params)?;
            println!(
                "  h{} = {}   |h| = {}   residual {}",
                i + 1,
                h,
                h.norm(),
                residual
            );
        }

        // order two: one solution, or three when p = 1 mod 4
        let params2 = ModelParams::new(p, coupling, 2)?;
        let sols2 = ti::solve_k2(&params2)?;
        println!("order 2: {} solutions", sols2.representative_count());
        for (i, h) in sols2.h_roots().iter().enumerate() {
            println!("  h{} = {}", i, h);
        }
        println!();
    }
    Ok(())
}
