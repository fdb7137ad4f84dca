//! The analytic toolbox: p-adic exponential and logarithm on their
//! convergence balls, square-root solvability, and Hensel-lifted roots.
//!
//! Run with: cargo run --example exp_log_sqrt

use padic_ising::functions::{exp, in_exp_group, is_square, log, mod_sqrt, sqrt};
use padic_ising::padic::PadicContext;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PadicContext::new(13)?;

    // exp converges on |x| <= 1/p and lands in the unit group E_p
    let x = ctx.integer(13);
    let e = exp(&x)?;
    println!("exp(13) = {}", e);
    println!("exp(13) in E_13: {}", in_exp_group(&e));

    // log inverts it
    let back = log(&e)?;
    println!("log(exp(13)) = {}", back);
    println!("round trip ok: {}", back.eq_mod(&x, 30)?);

    // homomorphism: exp(a + b) = exp(a) exp(b)
    let y = ctx.integer(2 * 13);
    let lhs = exp(&x.add(&y)?)?;
    let rhs = exp(&x)?.mul(&exp(&y)?)?;
    println!("exp(a+b) = exp(a)exp(b): {}", lhs.eq_mod(&rhs, 30)?);

    // square roots modulo p (Tonelli-Shanks above p = 100)
    println!("sqrt(4) mod 5 = {}", mod_sqrt(4, 5)?);
    println!("sqrt(2) mod 5: {:?}", mod_sqrt(2, 5));
    println!("sqrt(20) mod 101 = {}", mod_sqrt(20, 101)?);

    // -1 is a square exactly when p = 1 mod 4
    for p in [5u64, 7, 13, 19] {
        let c = PadicContext::new(p)?;
        println!(
            "-1 a square in Q_{}: {} (p mod 4 = {})",
            p,
            is_square(&c.integer(-1))?,
            p % 4
        );
    }

    // Hensel lifting to full working precision
    let c5 = PadicContext::new(5)?;
    let (root, other) = sqrt(&c5.integer(-1))?;
    println!("sqrt(-1) in Q_5 = {}", root);
    println!("other root     = {}", other);
    let square = root.mul(&root)?;
    println!("root^2 = -1: {}", square.eq_mod(&c5.integer(-1), 31)?);
    Ok(())
}
