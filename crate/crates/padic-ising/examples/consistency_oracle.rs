//! The brute-force consistency oracle: summing the level-n distribution over
//! the outer spins must reproduce the level-(n-1) distribution. Solution
//! fields pass; a perturbed field fails with a visible residual.
//!
//! Run with: cargo run --release --example consistency_oracle

use padic_ising::census::verify_consistency;
use padic_ising::ti::{Coupling, ModelParams};
use padic_ising::tree::{check_consistency, consistency_guard_digits, BoundaryField, CayleyTree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 13u64;
    let order = 3u32;
    let depth = 2u32;

    println!("consistency of every translation-invariant field at p = {p}, k = {order}:");
    let summary = verify_consistency(p, Coupling::canonical(p), order, depth, 32)?;
    for f in &summary.fields {
        println!(
            "  field {}: passed = {} over {} inner configurations, max residual exponent {:?} (tolerance -{})",
            f.field, f.passed, f.checked, f.max_residual_exponent, f.tolerance_exponent
        );
    }

    // a field that solves nothing: constant 1 + p
    let tree = CayleyTree::new(order, depth)?;
    let guard = consistency_guard_digits(&tree, depth);
    let params = ModelParams::with_precision(p, Coupling::canonical(p), order, 32 + guard)?;
    let perturbed = params.context().integer(1 + p as i64);
    let field = BoundaryField::constant(&tree, params, perturbed)?;
    let report = check_consistency(&tree, depth, &field, 26)?;
    println!(
        "perturbed field 1 + p: passed = {}, failures = {} of {}, max residual {}",
        report.passed, report.failures, report.checked, report.max_residual
    );
    Ok(())
}
