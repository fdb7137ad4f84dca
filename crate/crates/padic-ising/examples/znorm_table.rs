//! Normalizer norms and the boundedness story: the h = 1 measure keeps norm
//! one at odd p, every other root (and p = 2) grows without bound, which is
//! what makes the phase transition strong.
//!
//! Run with: cargo run --example znorm_table

use padic_ising::ti::{self, Boundedness, Coupling, ModelParams, TiRoot};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params13 = ModelParams::new(13, Coupling::canonical(13), 3)?;

    println!("closed-form |Z| exponents at p = 13 (levels 1..6):");
    for root in TiRoot::ALL {
        if !root.exists_for(13) {
            continue;
        }
        let mut exps = Vec::new();
        for n in 1..=6 {
            let r = ti::normalizer_norm(n, root, &params13)?;
            exps.push(r.norm.exponent().unwrap());
        }
        let b = ti::boundedness(root, &params13)?;
        println!("  h{}: {:?}  ({:?})", root.index(), exps, b);
    }

    println!();
    println!("measure-norm exponents 1/|Z| at p = 13 (growth = unbounded measure):");
    for root in [TiRoot::H1, TiRoot::H2] {
        let exps: Vec<i64> = (1..=8)
            .map(|n| {
                ti::measure_norm(n, root, &params13)
                    .unwrap()
                    .exponent()
                    .unwrap()
            })
            .collect();
        println!("  h{}: {:?}", root.index(), exps);
    }

    println!();
    println!("p = 2 is special: even the unique measure is unbounded");
    let params2 = ModelParams::new(2, Coupling::canonical(2), 3)?;
    let exps: Vec<i64> = (1..=6)
        .map(|n| {
            ti::measure_norm(n, TiRoot::H1, &params2)
                .unwrap()
                .exponent()
                .unwrap()
        })
        .collect();
    println!("  |mu| exponents: {:?}", exps);
    assert_eq!(
        ti::boundedness(TiRoot::H1, &params2)?,
        Boundedness::Unbounded
    );

    println!();
    println!("verdicts:");
    for p in [7u64, 5, 13] {
        let params = ModelParams::new(p, Coupling::canonical(p), 3)?;
        let v = ti::transition_verdict(&params)?;
        println!(
            "  p = {:2}: {:?} (at least three measures: {})",
            p, v.transition, v.at_least_three_measures
        );
    }
    Ok(())
}
