//! Prime census: one classification row per prime, with the congruence
//! classifier cross-checked against direct root extraction.
//!
//! Run with: cargo run --example census

use padic_ising::census::{census_rows, primes_up_to, write_csv, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let primes = primes_up_to(100);
    let config = RunConfig {
        threads: 2,
        ..RunConfig::default()
    };
    let rows = census_rows(&primes, &config)?;

    let mut out = Vec::new();
    write_csv(&rows, &mut out)?;
    print!("{}", String::from_utf8(out)?);

    let transitions = rows
        .iter()
        .filter(|r| r.tipggm > 1)
        .map(|r| r.prime)
        .collect::<Vec<_>>();
    println!();
    println!(
        "primes below 100 with more than one measure: {:?}",
        transitions
    );
    println!("(exactly the primes congruent to 1 mod 4)");
    Ok(())
}
