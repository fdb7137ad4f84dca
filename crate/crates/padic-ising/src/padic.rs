//! Exact arithmetic on p-adic numbers at fixed, tracked precision.
//!
//! A nonzero value is stored in canonical form `p^valuation * unit` where the
//! unit part is an integer in `[1, p^precision)` coprime to `p`. The
//! `precision` field counts guaranteed significant base-p digits; addition and
//! subtraction shrink it when leading digits cancel. Norms are exact powers of
//! `p`, never floats.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Arithmetic errors for the p-adic core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("invalid precision: working {working} digits, floor {floor}")]
    BadPrecision { working: u32, floor: u32 },
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("result precision {got} digits fell below the floor of {floor}")]
    PrecisionUnderflow { got: i64, floor: u32 },
    #[error("zero has no digit expansion")]
    ZeroHasNoDigits,
    #[error("requested precision {requested} exceeds the guaranteed {available}")]
    PrecisionExceeded { requested: i64, available: i64 },
    #[error("operands mix primes {0} and {1}")]
    PrimeMismatch(u64, u64),
    #[error("operands mix incompatible contexts")]
    ContextMismatch,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Shared configuration: the prime and the precision policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicContext {
    prime: u64,
    working_precision: u32,
    precision_floor: u32,
}

impl PadicContext {
    pub const DEFAULT_PRECISION: u32 = 32;
    pub const DEFAULT_FLOOR: u32 = 8;

    pub fn new(prime: u64) -> Result<Self, PadicError> {
        Self::with_precision(prime, Self::DEFAULT_PRECISION, Self::DEFAULT_FLOOR)
    }

    pub fn with_precision(
        prime: u64,
        working_precision: u32,
        precision_floor: u32,
    ) -> Result<Self, PadicError> {
        if !is_prime_u64(prime) {
            return Err(PadicError::NotPrime(prime));
        }
        if precision_floor < 1 || working_precision < precision_floor {
            return Err(PadicError::BadPrecision {
                working: working_precision,
                floor: precision_floor,
            });
        }
        Ok(PadicContext {
            prime,
            working_precision,
            precision_floor,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn working_precision(&self) -> u32 {
        self.working_precision
    }

    pub fn precision_floor(&self) -> u32 {
        self.precision_floor
    }

    pub(crate) fn prime_pow(&self, k: u32) -> BigUint {
        BigUint::from(self.prime).pow(k)
    }

    /// The zero value (distinguished: no valuation, no digits).
    pub fn zero(&self) -> PadicNumber {
        PadicNumber {
            ctx: *self,
            valuation: 0,
            unit: BigUint::zero(),
            precision: self.working_precision,
            zero: true,
        }
    }

    pub fn one(&self) -> PadicNumber {
        self.integer(1)
    }

    /// Embeds a small integer at working precision.
    pub fn integer(&self, n: i64) -> PadicNumber {
        self.from_ratio(n, 1)
            .expect("integer embedding cannot fail")
    }

    /// The p-adic value of `numerator / denominator` at working precision.
    ///
    /// Valuation is `v_p(num) - v_p(den)`; the unit part is the residue of the
    /// p-free fraction modulo `p^N`.
    pub fn from_ratio(&self, numerator: i64, denominator: i64) -> Result<PadicNumber, PadicError> {
        if denominator == 0 {
            return Err(PadicError::ZeroDenominator);
        }
        if numerator == 0 {
            return Ok(self.zero());
        }
        let p = self.prime as i128;
        let mut val: i64 = 0;
        let mut num = numerator as i128;
        let mut den = denominator as i128;
        while num % p == 0 {
            num /= p;
            val += 1;
        }
        while den % p == 0 {
            den /= p;
            val -= 1;
        }
        let modulus = BigInt::from(self.prime_pow(self.working_precision));
        let num = BigInt::from(num);
        let den = BigInt::from(den);
        let inv = mod_inverse(&den, &modulus).expect("denominator is coprime to p");
        let unit = (num * inv).mod_floor(&modulus);
        Ok(PadicNumber {
            ctx: *self,
            valuation: val,
            unit: unit.to_biguint().expect("mod_floor is nonnegative"),
            precision: self.working_precision,
            zero: false,
        })
    }
}

/// Modular inverse of `a` modulo `m` (both coprime), via extended gcd.
fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// An exact p-adic norm: zero or an integer power of the prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicNorm {
    Zero,
    /// The value `base^exponent`.
    PowerOf {
        base: u64,
        exponent: i64,
    },
}

impl PadicNorm {
    pub fn power(base: u64, exponent: i64) -> Self {
        PadicNorm::PowerOf { base, exponent }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PadicNorm::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, PadicNorm::PowerOf { exponent: 0, .. })
    }

    /// Exponent e with norm = p^e; `None` for the zero norm.
    pub fn exponent(&self) -> Option<i64> {
        match self {
            PadicNorm::Zero => None,
            PadicNorm::PowerOf { exponent, .. } => Some(*exponent),
        }
    }

    /// Raises the norm to an integer power (multiplicativity).
    pub fn pow(self, e: i64) -> Self {
        match self {
            PadicNorm::Zero => PadicNorm::Zero,
            PadicNorm::PowerOf { base, exponent } => PadicNorm::PowerOf {
                base,
                exponent: exponent * e,
            },
        }
    }
}

impl PartialOrd for PadicNorm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (PadicNorm::Zero, PadicNorm::Zero) => Some(std::cmp::Ordering::Equal),
            (PadicNorm::Zero, PadicNorm::PowerOf { .. }) => Some(std::cmp::Ordering::Less),
            (PadicNorm::PowerOf { .. }, PadicNorm::Zero) => Some(std::cmp::Ordering::Greater),
            (
                PadicNorm::PowerOf {
                    base: b1,
                    exponent: e1,
                },
                PadicNorm::PowerOf {
                    base: b2,
                    exponent: e2,
                },
            ) => {
                if b1 != b2 {
                    None
                } else {
                    e1.partial_cmp(e2)
                }
            }
        }
    }
}

impl fmt::Display for PadicNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicNorm::Zero => write!(f, "0"),
            PadicNorm::PowerOf { exponent: 0, .. } => write!(f, "1"),
            PadicNorm::PowerOf { base, exponent } => write!(f, "{}^{}", base, exponent),
        }
    }
}

/// A certified bound on a norm: exact when the leading digit of the value is
/// visible, an upper bound when the value vanishes within the tracked window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormBound {
    Exact(PadicNorm),
    AtMost(PadicNorm),
}

impl NormBound {
    /// The bounding norm itself.
    pub fn norm(&self) -> PadicNorm {
        match self {
            NormBound::Exact(n) | NormBound::AtMost(n) => *n,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NormBound::Exact(_))
    }

    /// Whether the bound certifies a norm of at most `p^(-k)`.
    pub fn certifies_at_most(&self, k: i64) -> bool {
        match self.norm() {
            PadicNorm::Zero => true,
            PadicNorm::PowerOf { exponent, .. } => exponent <= -k,
        }
    }
}

impl fmt::Display for NormBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormBound::Exact(n) => write!(f, "{}", n),
            NormBound::AtMost(n) => write!(f, "<= {}", n),
        }
    }
}

/// A p-adic number at tracked precision.
#[derive(Debug, Clone)]
pub struct PadicNumber {
    ctx: PadicContext,
    valuation: i64,
    unit: BigUint,
    precision: u32,
    zero: bool,
}

impl PadicNumber {
    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn prime(&self) -> u64 {
        self.ctx.prime
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// The order of p dividing the value; `None` for zero by convention.
    pub fn valuation(&self) -> Option<i64> {
        if self.zero {
            None
        } else {
            Some(self.valuation)
        }
    }

    /// Guaranteed significant base-p digits.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Absolute precision: the value is known modulo `p^abs`. `None` (infinite)
    /// for the distinguished zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        if self.zero {
            None
        } else {
            Some(self.valuation + self.precision as i64)
        }
    }

    /// The unit part as an integer in `[1, p^precision)`, zero for zero.
    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// |x|_p as an exact power of p.
    pub fn norm(&self) -> PadicNorm {
        if self.zero {
            PadicNorm::Zero
        } else {
            PadicNorm::power(self.ctx.prime, -self.valuation)
        }
    }

    /// Leading digit x_0 of the canonical expansion (in `[1, p-1]`).
    pub fn unit_digit(&self) -> Option<u64> {
        if self.zero {
            None
        } else {
            Some((&self.unit % self.ctx.prime).to_u64().unwrap())
        }
    }

    /// Digits x_0..x_{count-1} of the unit part, least significant first.
    pub fn digits(&self, count: u32) -> Result<Vec<u64>, PadicError> {
        if self.zero {
            return Err(PadicError::ZeroHasNoDigits);
        }
        if count > self.precision {
            return Err(PadicError::PrecisionExceeded {
                requested: count as i64,
                available: self.precision as i64,
            });
        }
        let p = BigUint::from(self.ctx.prime);
        let mut u = self.unit.clone();
        let mut out = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let (q, r) = u.div_rem(&p);
            out.push(r.to_u64().unwrap());
            u = q;
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &PadicNumber) -> Result<(), PadicError> {
        if self.ctx.prime != other.ctx.prime {
            return Err(PadicError::PrimeMismatch(self.ctx.prime, other.ctx.prime));
        }
        if self.ctx != other.ctx {
            return Err(PadicError::ContextMismatch);
        }
        Ok(())
    }

    /// Crate-internal constructor from canonical parts. The unit must be
    /// coprime to p; it is reduced modulo `p^precision`.
    pub(crate) fn from_parts(
        ctx: PadicContext,
        valuation: i64,
        unit: BigUint,
        precision: u32,
    ) -> PadicNumber {
        let precision = precision.min(ctx.working_precision);
        let unit = unit % ctx.prime_pow(precision);
        debug_assert!(!unit.is_zero() && !(&unit % ctx.prime).is_zero());
        PadicNumber {
            ctx,
            valuation,
            unit,
            precision,
            zero: false,
        }
    }

    fn normalized(
        ctx: PadicContext,
        valuation: i64,
        raw: BigUint,
        window: i64,
    ) -> Result<PadicNumber, PadicError> {
        // raw is the value / p^valuation, known modulo p^window
        if raw.is_zero() {
            return Ok(ctx.zero());
        }
        let p = BigUint::from(ctx.prime);
        let mut u = raw;
        let mut shift: i64 = 0;
        while (&u % &p).is_zero() {
            u /= &p;
            shift += 1;
        }
        let prec = window - shift;
        if prec < ctx.precision_floor as i64 {
            return Err(PadicError::PrecisionUnderflow {
                got: prec,
                floor: ctx.precision_floor,
            });
        }
        let prec = prec.min(ctx.working_precision as i64) as u32;
        let u = u % ctx.prime_pow(prec);
        debug_assert!(!u.is_zero());
        Ok(PadicNumber {
            ctx,
            valuation: valuation + shift,
            unit: u,
            precision: prec,
            zero: false,
        })
    }

    /// Exact sum; guaranteed precision shrinks by the cancellation depth.
    pub fn add(&self, other: &PadicNumber) -> Result<PadicNumber, PadicError> {
        self.check_compatible(other)?;
        if self.zero {
            return Ok(other.clone());
        }
        if other.zero {
            return Ok(self.clone());
        }
        let m = self.valuation.min(other.valuation);
        let abs = self
            .absolute_precision()
            .unwrap()
            .min(other.absolute_precision().unwrap());
        let window = abs - m;
        debug_assert!(window >= 1);
        let modulus = self.ctx.prime_pow(window as u32);
        let lift = |x: &PadicNumber| -> BigUint {
            let shift = (x.valuation - m) as u32;
            if shift as i64 >= window {
                BigUint::zero()
            } else {
                (&x.unit * x.ctx.prime_pow(shift)) % &modulus
            }
        };
        let s = (lift(self) + lift(other)) % &modulus;
        Self::normalized(self.ctx, m, s, window)
    }

    pub fn neg(&self) -> PadicNumber {
        if self.zero {
            return self.clone();
        }
        let modulus = self.ctx.prime_pow(self.precision);
        PadicNumber {
            ctx: self.ctx,
            valuation: self.valuation,
            unit: &modulus - &self.unit,
            precision: self.precision,
            zero: false,
        }
    }

    pub fn sub(&self, other: &PadicNumber) -> Result<PadicNumber, PadicError> {
        self.add(&other.neg())
    }

    /// Exact product; valuations add, norms multiply.
    pub fn mul(&self, other: &PadicNumber) -> Result<PadicNumber, PadicError> {
        self.check_compatible(other)?;
        if self.zero || other.zero {
            return Ok(self.ctx.zero());
        }
        let prec = self.precision.min(other.precision);
        let unit = (&self.unit * &other.unit) % self.ctx.prime_pow(prec);
        Ok(PadicNumber {
            ctx: self.ctx,
            valuation: self.valuation + other.valuation,
            unit,
            precision: prec,
            zero: false,
        })
    }

    pub fn div(&self, other: &PadicNumber) -> Result<PadicNumber, PadicError> {
        self.check_compatible(other)?;
        if other.zero {
            return Err(PadicError::DivisionByZero);
        }
        if self.zero {
            return Ok(self.ctx.zero());
        }
        let prec = self.precision.min(other.precision);
        let modulus = BigInt::from(self.ctx.prime_pow(prec));
        let inv = mod_inverse(&BigInt::from(other.unit.clone()), &modulus)
            .expect("unit part is coprime to p");
        let unit = (BigInt::from(self.unit.clone()) * inv)
            .mod_floor(&modulus)
            .to_biguint()
            .unwrap();
        Ok(PadicNumber {
            ctx: self.ctx,
            valuation: self.valuation - other.valuation,
            unit,
            precision: prec,
            zero: false,
        })
    }

    pub fn inv(&self) -> Result<PadicNumber, PadicError> {
        self.one_like().div(self)
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, n: i64) -> Result<PadicNumber, PadicError> {
        if n == 0 {
            return Ok(self.one_like());
        }
        if self.zero {
            return if n < 0 {
                Err(PadicError::DivisionByZero)
            } else {
                Ok(self.clone())
            };
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_like();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// One at this value's precision (identity for chained products).
    fn one_like(&self) -> PadicNumber {
        PadicNumber {
            ctx: self.ctx,
            valuation: 0,
            unit: BigUint::one(),
            precision: self.precision,
            zero: false,
        }
    }

    /// True iff `|self - other|_p <= p^(-k)`.
    ///
    /// `k` must not exceed the absolute precision of either operand, otherwise
    /// the comparison would read unknown digits.
    pub fn eq_mod(&self, other: &PadicNumber, k: i64) -> Result<bool, PadicError> {
        if self.ctx.prime != other.ctx.prime {
            return Err(PadicError::PrimeMismatch(self.ctx.prime, other.ctx.prime));
        }
        for x in [self, other] {
            if let Some(abs) = x.absolute_precision() {
                if k > abs {
                    return Err(PadicError::PrecisionExceeded {
                        requested: k,
                        available: abs,
                    });
                }
            }
        }
        match (self.zero, other.zero) {
            (true, true) => Ok(true),
            (true, false) => Ok(other.valuation >= k),
            (false, true) => Ok(self.valuation >= k),
            (false, false) => {
                let m = self.valuation.min(other.valuation);
                if m >= k {
                    return Ok(true);
                }
                let window = (k - m) as u32;
                let modulus = self.ctx.prime_pow(window);
                let lift = |x: &PadicNumber| -> BigUint {
                    let shift = (x.valuation - m) as u32;
                    if shift >= window {
                        BigUint::zero()
                    } else {
                        (&x.unit * x.ctx.prime_pow(shift)) % &modulus
                    }
                };
                Ok(lift(self) == lift(other))
            }
        }
    }

    /// Certified bound on `|self - other|_p`, usable even when the tracked
    /// difference would fall below the precision floor: the leading digit of
    /// a visible difference is exact no matter how many digits remain.
    pub fn difference_norm(&self, other: &PadicNumber) -> Result<NormBound, PadicError> {
        let p = self.ctx.prime;
        match self.difference_valuation(other)? {
            (Some(v), _) => Ok(NormBound::Exact(PadicNorm::power(p, -v))),
            (None, None) => Ok(NormBound::Exact(PadicNorm::Zero)),
            (None, Some(window)) => Ok(NormBound::AtMost(PadicNorm::power(p, -window))),
        }
    }

    /// Valuation of `self - other`, bounded by what the precision can certify:
    /// `Ok(None)` means the difference vanishes within the certified window.
    pub(crate) fn difference_valuation(
        &self,
        other: &PadicNumber,
    ) -> Result<(Option<i64>, Option<i64>), PadicError> {
        // returns (exact valuation if visible, certified window)
        if self.ctx.prime != other.ctx.prime {
            return Err(PadicError::PrimeMismatch(self.ctx.prime, other.ctx.prime));
        }
        match (self.zero, other.zero) {
            (true, true) => Ok((None, None)),
            (true, false) => Ok((Some(other.valuation), other.absolute_precision())),
            (false, true) => Ok((Some(self.valuation), self.absolute_precision())),
            (false, false) => {
                let m = self.valuation.min(other.valuation);
                let abs = self
                    .absolute_precision()
                    .unwrap()
                    .min(other.absolute_precision().unwrap());
                let window = (abs - m) as u32;
                let modulus = self.ctx.prime_pow(window);
                let lift = |x: &PadicNumber| -> BigUint {
                    let shift = (x.valuation - m) as u32;
                    if shift >= window {
                        BigUint::zero()
                    } else {
                        (&x.unit * x.ctx.prime_pow(shift)) % &modulus
                    }
                };
                let a = lift(self);
                let b = lift(other);
                let d = if a >= b { &a - &b } else { &b - &a };
                if d.is_zero() {
                    return Ok((None, Some(abs)));
                }
                let p = BigUint::from(self.ctx.prime);
                let mut v = 0i64;
                let mut d = d;
                while (&d % &p).is_zero() {
                    d /= &p;
                    v += 1;
                }
                Ok((Some(m + v), Some(abs)))
            }
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "0");
        }
        let show = self.precision.min(8);
        let digits = self.digits(show).expect("within precision");
        let p = self.ctx.prime;
        let mut first = true;
        for (i, d) in digits.iter().enumerate() {
            if *d == 0 {
                continue;
            }
            let e = self.valuation + i as i64;
            if !first {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{}", d)?,
                1 => write!(f, "{}*{}", d, p)?,
                _ => write!(f, "{}*{}^{}", d, p, e)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", p, self.valuation + self.precision as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p).unwrap()
    }

    #[test]
    fn from_ratio_valuations() {
        let c = ctx(3);
        let x = c.from_ratio(12, 1).unwrap();
        assert_eq!(x.valuation(), Some(1));
        assert_eq!(x.norm(), PadicNorm::power(3, -1));

        let one = c.from_ratio(1, 1).unwrap();
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.unit_digit(), Some(1));
        assert!(one.norm().is_one());

        let c5 = ctx(5);
        let y = c5.from_ratio(1, 5).unwrap();
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(y.norm(), PadicNorm::power(5, 1));
    }

    #[test]
    fn from_ratio_zero_and_bad_denominator() {
        let c = ctx(7);
        assert!(c.from_ratio(0, 3).unwrap().is_zero());
        assert!(matches!(
            c.from_ratio(1, 0),
            Err(PadicError::ZeroDenominator)
        ));
    }

    #[test]
    fn norm_of_nine_halves_at_three() {
        let c = ctx(3);
        let x = c.from_ratio(9, 2).unwrap();
        assert_eq!(x.norm().exponent(), Some(-2));
        let y = c.from_ratio(1, 9).unwrap();
        assert_eq!(y.norm().exponent(), Some(2));
    }

    #[test]
    fn additive_inverse_gives_exact_zero() {
        let c = ctx(5);
        let x = c.from_ratio(37, 11).unwrap();
        let s = x.add(&x.neg()).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.norm(), PadicNorm::Zero);
    }

    #[test]
    fn unit_times_unit() {
        let c = ctx(5);
        let x = c.integer(2).mul(&c.integer(3)).unwrap();
        let six = c.integer(6);
        assert!(x.eq_mod(&six, 32).unwrap());
        assert!(x.norm().is_one());
    }

    #[test]
    fn strong_triangle_distinct_norms() {
        // |x|=1/3, |y|=1/9 at p=3 -> |x+y| = 1/3
        let c = ctx(3);
        let x = c.integer(3);
        let y = c.integer(9);
        assert_eq!(x.add(&y).unwrap().norm().exponent(), Some(-1));
        assert_eq!(x.sub(&y).unwrap().norm().exponent(), Some(-1));
    }

    #[test]
    fn digits_of_seven_base_five() {
        let c = ctx(5);
        let x = c.integer(7);
        assert_eq!(x.digits(2).unwrap(), vec![2, 1]);
        let one = c.one();
        assert_eq!(one.digits(4).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn digits_of_minus_one() {
        let c = ctx(5);
        let x = c.integer(-1);
        assert_eq!(x.digits(3).unwrap(), vec![4, 4, 4]);
        // confirm by adding one back
        assert!(x.add(&c.one()).unwrap().is_zero());
    }

    #[test]
    fn digits_errors() {
        let c = ctx(5);
        assert_eq!(c.zero().digits(1), Err(PadicError::ZeroHasNoDigits));
        assert!(matches!(
            c.one().digits(33),
            Err(PadicError::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn eq_mod_forced_cases() {
        let c = ctx(7);
        let x = c.one();
        assert!(x.eq_mod(&x, 20).unwrap());
        let y = c.integer(1 + 343); // 1 + p^3
        assert!(x.eq_mod(&y, 3).unwrap());
        assert!(!x.eq_mod(&y, 4).unwrap());
    }

    #[test]
    fn eq_mod_respects_precision() {
        let c = ctx(7);
        let x = c.one();
        assert!(matches!(
            x.eq_mod(&c.integer(2), 40),
            Err(PadicError::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn cancellation_shrinks_precision() {
        let c = ctx(5);
        let x = c.integer(1 + 125); // 1 + 5^3
        let d = x.sub(&c.one()).unwrap();
        assert_eq!(d.valuation(), Some(3));
        // absolute precision of both operands is 32; three digits cancelled
        assert_eq!(d.precision(), 32 - 3);
    }

    #[test]
    fn deep_cancellation_underflows() {
        let c = PadicContext::with_precision(5, 8, 8).unwrap();
        let x = c.one();
        let y = c.integer(1 + 5i64.pow(6)); // agree to 6 of 8 digits
        assert!(matches!(
            x.sub(&y),
            Err(PadicError::PrecisionUnderflow { .. })
        ));
    }

    #[test]
    fn division_by_zero() {
        let c = ctx(5);
        assert!(matches!(
            c.one().div(&c.zero()),
            Err(PadicError::DivisionByZero)
        ));
        assert!(matches!(c.zero().powi(-1), Err(PadicError::DivisionByZero)));
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let c = ctx(13);
        let x = c.from_ratio(7, 3).unwrap();
        let mut acc = c.one();
        for _ in 0..5 {
            acc = acc.mul(&x).unwrap();
        }
        assert!(acc.eq_mod(&x.powi(5).unwrap(), 30).unwrap());
        let inv2 = x.powi(-2).unwrap();
        assert!(x
            .powi(2)
            .unwrap()
            .mul(&inv2)
            .unwrap()
            .eq_mod(&c.one(), 30)
            .unwrap());
    }

    #[test]
    fn mixed_primes_rejected() {
        let a = ctx(5).one();
        let b = ctx(7).one();
        assert!(matches!(a.add(&b), Err(PadicError::PrimeMismatch(5, 7))));
    }

    #[test]
    fn context_validation() {
        assert!(matches!(PadicContext::new(6), Err(PadicError::NotPrime(6))));
        assert!(matches!(
            PadicContext::with_precision(5, 4, 8),
            Err(PadicError::BadPrecision { .. })
        ));
    }

    #[test]
    fn values_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<PadicNumber>();
        check::<PadicContext>();
        check::<PadicNorm>();
    }

    #[test]
    fn norm_ordering() {
        let z = PadicNorm::Zero;
        let small = PadicNorm::power(5, -3);
        let big = PadicNorm::power(5, 2);
        assert!(z < small);
        assert!(small < big);
        assert_eq!(
            PadicNorm::power(5, 1).partial_cmp(&PadicNorm::power(7, 1)),
            None
        );
    }
}
