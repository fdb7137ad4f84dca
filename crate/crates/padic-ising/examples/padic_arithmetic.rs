//! Tour of the arithmetic core: canonical forms, exact norms, digit
//! expansions, and how precision tracking reacts to cancellation.
//!
//! Run with: cargo run --example padic_arithmetic

use padic_ising::padic::PadicContext;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PadicContext::new(5)?;

    let x = ctx.from_ratio(12, 1)?;
    println!("12 in Q_5:      {}", x);
    println!("  valuation:    {:?}", x.valuation());
    println!("  norm:         {}", x.norm());

    let y = ctx.from_ratio(7, 10)?;
    println!("7/10 in Q_5:    {}", y);
    println!(
        "  norm:         {} (one factor of 5 in the denominator)",
        y.norm()
    );

    // exact field arithmetic
    let sum = x.add(&y)?;
    let product = x.mul(&y)?;
    println!("sum:            {}", sum);
    println!("product:        {} with norm {}", product, product.norm());

    // digits of -1 are all p-1
    let minus_one = ctx.integer(-1);
    println!("digits of -1:   {:?}", minus_one.digits(6)?);

    // the strong triangle inequality with distinct norms is an equality
    let a = ctx.integer(5);
    let b = ctx.integer(25);
    println!(
        "|5|_5 = {}, |25|_5 = {}, |5 + 25|_5 = {}",
        a.norm(),
        b.norm(),
        a.add(&b)?.norm()
    );

    // cancellation is tracked: subtracting nearby values costs digits
    let close = ctx.integer(1 + 5i64.pow(4));
    let diff = close.sub(&ctx.one())?;
    println!(
        "(1 + 5^4) - 1:  valuation {:?}, {} of {} digits guaranteed",
        diff.valuation(),
        diff.precision(),
        ctx.working_precision()
    );

    // equality is always "modulo p^k"
    let u = ctx.one();
    let v = ctx.integer(1 + 125);
    println!("1 = 1 + 5^3 mod 5^3: {}", u.eq_mod(&v, 3)?);
    println!("1 = 1 + 5^3 mod 5^4: {}", u.eq_mod(&v, 4)?);
    Ok(())
}
