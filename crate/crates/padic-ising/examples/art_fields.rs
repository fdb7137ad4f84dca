//! Planted boundary fields: the order-2 tree is embedded in a larger tree,
//! the nontrivial constant solution planted on it and padded by 1. Together
//! with the h = 1 field this gives at least three distinct measures whenever
//! p = 1 mod 4.
//!
//! Run with: cargo run --example art_fields

use padic_ising::art::{fields_distinct, verify_art, ArtField};
use padic_ising::ti::{Coupling, ModelParams};
use padic_ising::tree::BoundaryField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 5u64;
    let order = 3u32;
    let depth = 3u32;
    let params = ModelParams::new(p, Coupling::canonical(p), order)?;

    let art1 = ArtField::build(1, &params, depth)?;
    let art2 = ArtField::build(2, &params, depth)?;
    println!("planted value for index 1: {}", art1.planted_value());
    println!("planted value for index 2: {}", art2.planted_value());

    // the embedded subtree keeps 3 children at the root, 2 elsewhere
    let tree = art1.tree();
    let fan: Vec<char> = tree
        .children(tree.root())
        .iter()
        .map(|&c| if art1.marked()[c] { 'h' } else { '1' })
        .collect();
    println!("root children pattern: {:?}", fan);
    for m in 1..=depth {
        let marked = tree.sphere(m).filter(|&v| art1.marked()[v]).count();
        println!(
            "level {}: {} of {} vertices carry the planted value",
            m,
            marked,
            tree.sphere_count(m)
        );
    }

    for art in [&art1, &art2] {
        let report = verify_art(art, None)?;
        println!(
            "field {}: fixed-point residual vanishes at all {} internal vertices: {} (max {})",
            art.index(),
            report.checked,
            report.passed,
            report.max_residual
        );
    }

    let ones = BoundaryField::constant(tree, params.clone(), params.context().one())?;
    println!(
        "three distinct fields: {}",
        fields_distinct(art1.field(), art2.field(), 8)?
            && fields_distinct(art1.field(), &ones, 8)?
            && fields_distinct(art2.field(), &ones, 8)?
    );
    Ok(())
}
