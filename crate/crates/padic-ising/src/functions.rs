//! Analytic and algebraic functions on Q_p: exponential, logarithm, square
//! roots with solvability tests, and membership in the unit group reached by
//! the exponential.

use crate::padic::{PadicContext, PadicError, PadicNumber};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("argument outside the convergence domain")]
    OutOfDomain,
    #[error("{0} is not a quadratic residue modulo {1}")]
    NotAResidue(u64, u64),
    #[error("value is not a square in Q_p")]
    NotASquare,
    #[error("zero input")]
    ZeroInput,
    #[error("residue input must be a unit modulo p")]
    NotAUnit,
    #[error("modulus must be an odd prime")]
    EvenPrime,
    #[error(transparent)]
    Arithmetic(#[from] PadicError),
}

/// Membership in the exp convergence ball `B(0, p^(-1/(p-1)))` means
/// valuation at least this bound (the radius is never an integer power of p,
/// so the strict bound lands on the next integer exponent).
fn exp_domain_valuation(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// A p-adic ball `B(center, p^(-radius_exponent))`, closed or strict.
///
/// Every ball in Q_p has a power-of-p radius, so a strict ball coincides with
/// the closed ball of the next smaller radius; the flag is kept so domains can
/// be written the way they are usually stated.
#[derive(Debug, Clone)]
pub struct DomainBall {
    center: PadicNumber,
    radius_exponent: i64,
    strict: bool,
}

impl DomainBall {
    pub fn new(center: PadicNumber, radius_exponent: i64, strict: bool) -> Self {
        DomainBall {
            center,
            radius_exponent,
            strict,
        }
    }

    /// Convergence domain of `exp`: `|x| < p^(-1/(p-1))`.
    pub fn exp_domain(ctx: PadicContext) -> Self {
        DomainBall::new(ctx.zero(), exp_domain_valuation(ctx.prime()) - 1, true)
    }

    /// Convergence domain of `log`: `|x - 1| < 1`.
    pub fn log_domain(ctx: PadicContext) -> Self {
        DomainBall::new(ctx.one(), 0, true)
    }

    /// The group reached by `exp`: `|x - 1| < p^(-1/(p-1))`.
    pub fn exp_group(ctx: PadicContext) -> Self {
        DomainBall::new(ctx.one(), exp_domain_valuation(ctx.prime()) - 1, true)
    }

    /// Smallest valuation of `x - center` that places x inside the ball.
    fn valuation_bound(&self) -> i64 {
        if self.strict {
            self.radius_exponent + 1
        } else {
            self.radius_exponent
        }
    }

    /// Membership test; errors with `PrecisionExceeded` when the available
    /// digits cannot decide it.
    pub fn contains(&self, x: &PadicNumber) -> Result<bool, FunctionError> {
        let need = self.valuation_bound();
        let (exact, window) = x.difference_valuation(&self.center)?;
        match exact {
            Some(v) => Ok(v >= need),
            None => match window {
                // the difference vanishes as far as the digits go
                None => Ok(true),
                Some(w) if w >= need => Ok(true),
                Some(w) => Err(PadicError::PrecisionExceeded {
                    requested: need,
                    available: w,
                }
                .into()),
            },
        }
    }
}

/// True iff x lies in the multiplicative group E_p = exp(convergence ball),
/// i.e. `|x - 1|_p < p^(-1/(p-1))`.
pub fn in_exp_group(x: &PadicNumber) -> bool {
    if x.is_zero() || x.valuation() != Some(0) {
        return false;
    }
    DomainBall::exp_group(x.context())
        .contains(x)
        .unwrap_or(false)
}

/// p-adic exponential: partial sums of `sum x^n / n!`.
///
/// Terms are accumulated until they drop below the target absolute precision;
/// the ultrametric makes the first omitted term bound the whole tail. Term
/// valuations are not monotone (they dip at n divisible by p), so the loop
/// runs to a proven cutoff instead of stopping at the first small term.
pub fn exp(x: &PadicNumber) -> Result<PadicNumber, FunctionError> {
    let ctx = x.context();
    if x.is_zero() {
        return Ok(ctx.one());
    }
    if !DomainBall::exp_domain(ctx).contains(x)? {
        return Err(FunctionError::OutOfDomain);
    }
    // the result is a unit determined by x modulo its absolute precision;
    // v(x^n/n!) >= n/2 for admissible x, hence the cutoff
    let target = x.absolute_precision().expect("x is nonzero");
    let cutoff = 2 * target + 8;
    let mut acc = ctx.one();
    let mut term = ctx.one();
    for n in 1..=cutoff {
        term = term.mul(x)?.div(&ctx.integer(n))?;
        if let Some(v) = term.valuation() {
            if v <= target {
                acc = acc.add(&term)?;
            }
        }
    }
    Ok(acc)
}

/// p-adic logarithm: `sum (-1)^(n+1) (x-1)^n / n` on `|x - 1| < 1`.
pub fn log(x: &PadicNumber) -> Result<PadicNumber, FunctionError> {
    let ctx = x.context();
    if x.is_zero() || !DomainBall::log_domain(ctx).contains(x)? {
        return Err(FunctionError::OutOfDomain);
    }
    let y = x.sub(&ctx.one())?;
    if y.is_zero() {
        return Ok(ctx.zero());
    }
    // v(y^n/n) >= n - log_p(n), so terms beyond the cutoff sit above the
    // absolute target
    let target = y.absolute_precision().expect("y is nonzero");
    let cutoff = 2 * target.max(1) + 16;
    let mut acc = ctx.zero();
    let mut power = ctx.one();
    for n in 1..=cutoff {
        power = power.mul(&y)?;
        let term = power.div(&ctx.integer(n))?;
        let term = if n % 2 == 0 { term.neg() } else { term };
        if let Some(v) = term.valuation() {
            if v <= target {
                acc = acc.add(&term)?;
            }
        }
    }
    Ok(acc)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Legendre symbol as +1 / p-1 (never 0 for unit input).
fn legendre(a: u64, p: u64) -> u64 {
    pow_mod(a, (p - 1) / 2, p)
}

/// Square root of a unit residue modulo an odd prime.
///
/// Exhaustive scan below 100, Tonelli-Shanks above (with a deterministic
/// smallest non-residue so census output is reproducible). Returns the root
/// `r <= (p-1)/2`.
pub fn mod_sqrt(a0: u64, p: u64) -> Result<u64, FunctionError> {
    if p == 2 {
        return Err(FunctionError::EvenPrime);
    }
    let a = a0 % p;
    if a == 0 {
        return Err(FunctionError::NotAUnit);
    }
    if p < 100 {
        for r in 1..p {
            if mul_mod(r, r, p) == a {
                return Ok(r.min(p - r));
            }
        }
        return Err(FunctionError::NotAResidue(a0, p));
    }
    if legendre(a, p) != 1 {
        return Err(FunctionError::NotAResidue(a0, p));
    }
    if p % 4 == 3 {
        let r = pow_mod(a, (p + 1) / 4, p);
        return Ok(r.min(p - r));
    }
    // Tonelli-Shanks: p - 1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) == 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
            debug_assert!(i < m);
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Ok(r.min(p - r))
}

/// Solvability of `x^2 = a` in Q_p: even valuation, and the unit part is a
/// residue mod p (odd p) or congruent to 1 mod 8 (p = 2).
pub fn is_square(a: &PadicNumber) -> Result<bool, FunctionError> {
    if a.is_zero() {
        return Err(FunctionError::ZeroInput);
    }
    if a.valuation().unwrap() % 2 != 0 {
        return Ok(false);
    }
    let p = a.prime();
    if p == 2 {
        let d = a.digits(3)?;
        Ok(d[1] == 0 && d[2] == 0)
    } else {
        let a0 = a.unit_digit().unwrap();
        Ok(legendre(a0, p) == 1)
    }
}

fn inv_mod(a: &BigUint, m: &BigUint) -> BigUint {
    let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
    e.x.mod_floor(&BigInt::from(m.clone()))
        .to_biguint()
        .unwrap()
}

/// Both square roots of a; the first is the canonical one (leading digit in
/// `[1, (p-1)/2]` for odd p, unit congruent to 1 mod 4 for p = 2).
///
/// The mod-p root is lifted by Newton steps doubling the exact digits
/// (bit-by-bit lifting for p = 2) until all tracked digits are exact.
pub fn sqrt(a: &PadicNumber) -> Result<(PadicNumber, PadicNumber), FunctionError> {
    if !is_square(a)? {
        return Err(FunctionError::NotASquare);
    }
    let ctx = a.context();
    let p = ctx.prime();
    let prec = a.precision();
    let modulus = BigUint::from(p).pow(prec);
    let u = a.unit();
    let root_unit = if p == 2 {
        // unit = 1 mod 8; flip bit k-1 whenever the square disagrees mod 2^(k+1)
        let mut s = BigUint::from(1u32);
        for k in 3..prec {
            let m = BigUint::from(2u32).pow(k + 1);
            if (&s * &s) % &m != u % &m {
                s += BigUint::from(2u32).pow(k - 1);
            }
        }
        s %= &modulus;
        if (&s % 4u32).to_u64() != Some(1) {
            s = &modulus - &s;
        }
        s
    } else {
        let a0 = a.unit_digit().unwrap();
        let r0 = mod_sqrt(a0, p)?;
        let mut s = BigUint::from(r0);
        let mut k = 1u32;
        while k < prec {
            k = (2 * k).min(prec);
            let m = BigUint::from(p).pow(k);
            let s_inv = inv_mod(&s, &m);
            let two_inv = inv_mod(&BigUint::from(2u32), &m);
            s = ((&s + (u % &m) * s_inv) % &m * two_inv) % &m;
        }
        let lead = (&s % p).to_u64().unwrap();
        if lead > (p - 1) / 2 {
            s = &modulus - &s;
        }
        s
    };
    let root = PadicNumber::from_parts(ctx, a.valuation().unwrap() / 2, root_unit, prec);
    let neg = root.neg();
    debug_assert!(root
        .mul(&root)
        .and_then(|sq| sq.eq_mod(a, a.valuation().unwrap() + prec as i64 - 1))
        .unwrap_or(false));
    Ok((root, neg))
}
