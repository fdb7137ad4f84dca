//! Translation-invariant fixed points of the boundary-field equation on trees
//! of order two and three, with the congruence classification of measure
//! counts, partition-function norms, boundedness and phase-transition
//! verdicts.

use crate::functions::{self, FunctionError};
use crate::padic::{NormBound, PadicContext, PadicError, PadicNorm, PadicNumber};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("coupling out of range: |J|_p must not exceed 1/p (odd p) or 1/4 (p = 2)")]
    CouplingOutOfRange,
    #[error("solver handles tree order {expected}, got {got}")]
    WrongOrder { expected: u32, got: u32 },
    #[error("discriminant of the reduced quadratic is not a square for this prime")]
    DeltaNotSquare,
    #[error("root h_{0} does not exist for this prime")]
    RootDoesNotExist(u8),
    #[error("recursion level {0} too large")]
    LevelTooLarge(u32),
    #[error(transparent)]
    Arithmetic(#[from] PadicError),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

/// An exact rational coupling constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coupling {
    num: i64,
    den: i64,
}

impl Coupling {
    pub fn new(num: i64, den: i64) -> Result<Self, SolverError> {
        if den == 0 {
            return Err(SolverError::Arithmetic(PadicError::ZeroDenominator));
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Coupling {
            num: sign * num / g,
            den: sign.saturating_mul(den) / g,
        })
    }

    pub fn integer(n: i64) -> Self {
        Coupling::new(n, 1).unwrap()
    }

    /// The census default: J = p for odd primes. At p = 2 that violates the
    /// coupling bound |J|_2 < 1/2, so the smallest admissible power J = 4 is
    /// used instead.
    pub fn canonical(prime: u64) -> Self {
        if prime == 2 {
            Coupling::integer(4)
        } else {
            Coupling::integer(prime as i64)
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    fn valuation(&self, p: u64) -> Option<i64> {
        if self.num == 0 {
            return None;
        }
        let p = p as i64;
        let mut v = 0i64;
        let mut n = self.num;
        let mut d = self.den;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        while d % p == 0 {
            d /= p;
            v -= 1;
        }
        Some(v)
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Model parameters: prime, exact coupling, tree order, and the derived
/// transfer weight theta = exp(2J).
#[derive(Debug, Clone)]
pub struct ModelParams {
    ctx: PadicContext,
    coupling: Coupling,
    order: u32,
    theta: PadicNumber,
    exp_coupling: PadicNumber,
}

impl ModelParams {
    pub fn new(prime: u64, coupling: Coupling, order: u32) -> Result<Self, SolverError> {
        Self::with_precision(prime, coupling, order, PadicContext::DEFAULT_PRECISION)
    }

    pub fn with_precision(
        prime: u64,
        coupling: Coupling,
        order: u32,
        precision: u32,
    ) -> Result<Self, SolverError> {
        let ctx = PadicContext::with_precision(
            prime,
            precision,
            PadicContext::DEFAULT_FLOOR.min(precision),
        )?;
        Self::with_context(ctx, coupling, order)
    }

    pub fn with_context(
        ctx: PadicContext,
        coupling: Coupling,
        order: u32,
    ) -> Result<Self, SolverError> {
        let p = ctx.prime();
        // |J|_p < p^(-1/(p-1)): at least one power of p for odd p, two for p = 2
        let min_val = if p == 2 { 2 } else { 1 };
        match coupling.valuation(p) {
            Some(v) if v >= min_val => {}
            _ => return Err(SolverError::CouplingOutOfRange),
        }
        if order < 1 {
            return Err(SolverError::WrongOrder {
                expected: 1,
                got: order,
            });
        }
        let j = ctx.from_ratio(coupling.num, coupling.den)?;
        let two_j = ctx.from_ratio(2 * coupling.num, coupling.den)?;
        let theta = functions::exp(&two_j)?;
        debug_assert!(functions::in_exp_group(&theta));
        let exp_coupling = functions::exp(&j)?;
        Ok(ModelParams {
            ctx,
            coupling,
            order,
            theta,
            exp_coupling,
        })
    }

    pub fn prime(&self) -> u64 {
        self.ctx.prime()
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// theta = exp(2J).
    pub fn theta(&self) -> &PadicNumber {
        &self.theta
    }

    /// exp(J), the per-edge transfer weight used by exact enumeration.
    pub fn exp_coupling(&self) -> &PadicNumber {
        &self.exp_coupling
    }

    /// The coupling as a p-adic value.
    pub fn coupling_value(&self) -> PadicNumber {
        self.ctx
            .from_ratio(self.coupling.num, self.coupling.den)
            .expect("validated on construction")
    }

    /// Same prime, coupling and precision on a different tree order.
    pub fn with_order(&self, order: u32) -> Result<Self, SolverError> {
        Self::with_context(self.ctx, self.coupling, order)
    }
}

/// Indices of the translation-invariant roots on the order-3 tree, following
/// z_1 = 1, z_2 = -1, z_{3,4} from the reduced quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TiRoot {
    H1,
    H2,
    H3,
    H4,
}

impl TiRoot {
    pub const ALL: [TiRoot; 4] = [TiRoot::H1, TiRoot::H2, TiRoot::H3, TiRoot::H4];

    pub fn index(self) -> u8 {
        match self {
            TiRoot::H1 => 1,
            TiRoot::H2 => 2,
            TiRoot::H3 => 3,
            TiRoot::H4 => 4,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get(i.checked_sub(1)? as usize).copied()
    }

    /// Existence by the congruence class of p.
    pub fn exists_for(self, prime: u64) -> bool {
        match self {
            TiRoot::H1 => true,
            TiRoot::H2 => prime % 4 == 1,
            TiRoot::H3 | TiRoot::H4 => prime % 12 == 1,
        }
    }
}

/// Solutions of the translation-invariant equation for one (p, J, k).
#[derive(Debug, Clone)]
pub struct TiSolutionSet {
    order: u32,
    z_roots: Vec<PadicNumber>,
    h_roots: Vec<PadicNumber>,
    discriminant: PadicNumber,
    sqrt_discriminant: Option<PadicNumber>,
    sqrt_z3_exists: bool,
}

impl TiSolutionSet {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Roots of the reduced equation in z = h^2.
    pub fn z_roots(&self) -> &[PadicNumber] {
        &self.z_roots
    }

    /// Canonical sign representatives of the h-solutions.
    pub fn h_roots(&self) -> &[PadicNumber] {
        &self.h_roots
    }

    /// All h-solutions: representatives and their negatives.
    pub fn signed_h_roots(&self) -> Vec<PadicNumber> {
        let mut all = self.h_roots.clone();
        all.extend(self.h_roots.iter().map(|h| h.neg()));
        all
    }

    /// Number of canonical representatives (the paper's count for k = 2).
    pub fn representative_count(&self) -> usize {
        self.h_roots.len()
    }

    /// Total number of h-solutions counting signs (N_p for k = 3).
    pub fn solution_count(&self) -> usize {
        2 * self.h_roots.len()
    }

    /// |TIpGGM|: distinct measures after identifying h with -h.
    pub fn measure_count(&self) -> usize {
        self.h_roots.len()
    }

    /// Discriminant of the reduced quadratic: theta^2 - 4 for k = 3,
    /// (theta - 3)(theta + 1) for k = 2.
    pub fn discriminant(&self) -> &PadicNumber {
        &self.discriminant
    }

    pub fn sqrt_discriminant(&self) -> Option<&PadicNumber> {
        self.sqrt_discriminant.as_ref()
    }

    pub fn sqrt_z3_exists(&self) -> bool {
        self.sqrt_z3_exists
    }
}

fn ti_equation_sides(
    h: &PadicNumber,
    params: &ModelParams,
) -> Result<(PadicNumber, PadicNumber), SolverError> {
    let one = params.ctx.one();
    let theta = &params.theta;
    let z = h.mul(h)?;
    let rhs = theta
        .mul(&z)?
        .add(&one)?
        .div(&z.add(theta)?)?
        .powi(params.order as i64)?;
    Ok((z, rhs))
}

/// Left-minus-right of the fixed-point equation `h^2 = ((theta h^2 + 1) /
/// (h^2 + theta))^k` at a constant field value.
///
/// The tracked subtraction can underflow for true solutions (nearly all
/// digits cancel); [`residual_norm`] gives a certified bound that never does.
pub fn ti_residual(h: &PadicNumber, params: &ModelParams) -> Result<PadicNumber, SolverError> {
    let (z, rhs) = ti_equation_sides(h, params)?;
    Ok(z.sub(&rhs)?)
}

/// Certified bound on the norm of the fixed-point residual at h.
pub fn residual_norm(h: &PadicNumber, params: &ModelParams) -> Result<NormBound, SolverError> {
    let (z, rhs) = ti_equation_sides(h, params)?;
    Ok(z.difference_norm(&rhs)?)
}

/// All translation-invariant solutions on the order-2 tree: h = 1 always,
/// plus (theta - 1 +- sqrt((theta-3)(theta+1)))/2 when p = 1 mod 4.
pub fn solve_k2(params: &ModelParams) -> Result<TiSolutionSet, SolverError> {
    if params.order != 2 {
        return Err(SolverError::WrongOrder {
            expected: 2,
            got: params.order,
        });
    }
    let ctx = params.ctx;
    let one = ctx.one();
    let theta = &params.theta;
    let disc = theta.sub(&ctx.integer(3))?.mul(&theta.add(&one)?)?;
    let mut h_roots = vec![one.clone()];
    let mut sqrt_disc = None;
    if functions::is_square(&disc)? {
        let (sd, _) = functions::sqrt(&disc)?;
        let half = ctx.from_ratio(1, 2)?;
        let base = theta.sub(&one)?;
        h_roots.push(base.add(&sd)?.mul(&half)?);
        h_roots.push(base.sub(&sd)?.mul(&half)?);
        sqrt_disc = Some(sd);
    }
    let z_roots = h_roots
        .iter()
        .map(|h| h.mul(h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TiSolutionSet {
        order: 2,
        z_roots,
        h_roots,
        discriminant: disc,
        sqrt_discriminant: sqrt_disc,
        sqrt_z3_exists: false,
    })
}

/// All translation-invariant solutions on the order-3 tree.
///
/// The reduced equation factors as `(z^2 - 1)(z^2 + (3 theta - theta^3) z + 1)`;
/// z = 1 and z = -1 are always roots, the quadratic contributes
/// `z_{3,4} = (theta^3 - 3 theta +- (theta^2 - 1) sqrt(theta^2 - 4)) / 2`
/// when the discriminant is a square. Each square z-root lifts to a pair of
/// h-solutions.
pub fn solve_k3(params: &ModelParams) -> Result<TiSolutionSet, SolverError> {
    if params.order != 3 {
        return Err(SolverError::WrongOrder {
            expected: 3,
            got: params.order,
        });
    }
    let ctx = params.ctx;
    let one = ctx.one();
    let theta = &params.theta;
    let delta = theta.mul(theta)?.sub(&ctx.integer(4))?;
    let mut z_roots = vec![one.clone(), one.neg()];
    let mut sqrt_disc = None;
    if functions::is_square(&delta)? {
        let (sd, _) = functions::sqrt(&delta)?;
        let cubic = theta.powi(3)?.sub(&theta.mul(&ctx.integer(3))?)?;
        let spread = theta.mul(theta)?.sub(&one)?.mul(&sd)?;
        let half = ctx.from_ratio(1, 2)?;
        z_roots.push(cubic.add(&spread)?.mul(&half)?);
        z_roots.push(cubic.sub(&spread)?.mul(&half)?);
        sqrt_disc = Some(sd);
    }
    let mut h_roots = Vec::new();
    let mut sqrt_z3_exists = false;
    for (i, z) in z_roots.iter().enumerate() {
        if functions::is_square(z)? {
            let (h, _) = functions::sqrt(z)?;
            if i == 2 {
                sqrt_z3_exists = true;
            }
            h_roots.push(h);
        }
    }
    Ok(TiSolutionSet {
        order: 3,
        z_roots,
        h_roots,
        discriminant: delta,
        sqrt_discriminant: sqrt_disc,
        sqrt_z3_exists,
    })
}

/// Whether sqrt(Delta(theta)) exists in Q_p (equivalently p = 1 mod 6).
pub fn sqrt_delta_exists(params: &ModelParams) -> Result<bool, SolverError> {
    if params.order != 3 {
        return Err(SolverError::WrongOrder {
            expected: 3,
            got: params.order,
        });
    }
    let delta = params
        .theta
        .mul(&params.theta)?
        .sub(&params.ctx.integer(4))?;
    Ok(functions::is_square(&delta)?)
}

/// Whether sqrt(z_3) exists in Q_p (equivalently p = 1 mod 12). Errors when
/// the discriminant is not a square, i.e. z_3 itself is missing.
pub fn sqrt_z3_exists(params: &ModelParams) -> Result<bool, SolverError> {
    if !sqrt_delta_exists(params)? {
        return Err(SolverError::DeltaNotSquare);
    }
    let sols = solve_k3(params)?;
    let z3 = &sols.z_roots()[2];
    // |z_3 + 1|_p < 1: z_3 is congruent to -1 mod p
    debug_assert!({
        let v = z3.add(&params.ctx.one()).unwrap().valuation();
        v.is_none_or(|v| v >= 1)
    });
    Ok(functions::is_square(z3)?)
}

fn pow2_exponent(n: u32) -> Result<i64, SolverError> {
    if n > 32 {
        return Err(SolverError::LevelTooLarge(n));
    }
    Ok(1i64 << (n - 1))
}

/// The per-level factor of the normalizer recursion,
/// `A_{n,h} = ((theta h^2 + 1)(h^2 + theta) / (theta h^2))^(2^(n-1))`.
pub fn recursion_factor(
    n: u32,
    h: &PadicNumber,
    params: &ModelParams,
) -> Result<PadicNumber, SolverError> {
    if n < 1 {
        return Err(SolverError::LevelTooLarge(n));
    }
    Ok(recursion_base(h, params)?.powi(pow2_exponent(n)?)?)
}

/// The base `B = (theta h^2 + 1)(h^2 + theta) / (theta h^2)` of the
/// normalizer recursion.
pub fn recursion_base(h: &PadicNumber, params: &ModelParams) -> Result<PadicNumber, SolverError> {
    let one = params.ctx.one();
    let theta = &params.theta;
    let z = h.mul(h)?;
    let num = theta.mul(&z)?.add(&one)?.mul(&z.add(theta)?)?;
    Ok(num.div(&theta.mul(&z)?)?)
}

/// Telescoped closed form of the normalizing constant, `Z_n = B^(2^(n-1)-1)`
/// with Z_1 = 1.
pub fn closed_form_normalizer(
    n: u32,
    h: &PadicNumber,
    params: &ModelParams,
) -> Result<PadicNumber, SolverError> {
    if n < 1 {
        return Err(SolverError::LevelTooLarge(n));
    }
    Ok(recursion_base(h, params)?.powi(pow2_exponent(n)? - 1)?)
}

/// Norm report for the normalizing constant at one root, Lemma-style
/// labelling `|Z_{n+1, h_i}|`.
#[derive(Debug, Clone)]
pub struct NormalizerNorm {
    pub level: u32,
    pub root: TiRoot,
    /// Exact norm of the closed form.
    pub norm: PadicNorm,
    /// Stated upper bound |theta - 1|^(2^n - 2) for roots 3 and 4 (for which
    /// the closed form only bounds the norm rather than pinning it).
    pub bound: Option<PadicNorm>,
    pub within_bound: bool,
}

/// The canonical h-value of a root, when it exists for this prime.
pub fn root_value(root: TiRoot, params: &ModelParams) -> Result<PadicNumber, SolverError> {
    let p = params.prime();
    if !root.exists_for(p) {
        return Err(SolverError::RootDoesNotExist(root.index()));
    }
    match root {
        TiRoot::H1 => Ok(params.ctx.one()),
        TiRoot::H2 => {
            let (h, _) = functions::sqrt(&params.ctx.integer(-1))?;
            Ok(h)
        }
        TiRoot::H3 | TiRoot::H4 => {
            let sols = solve_k3(&params.with_order(3)?)?;
            let z = &sols.z_roots()[if root == TiRoot::H3 { 2 } else { 3 }];
            let (h, _) = functions::sqrt(z)?;
            Ok(h)
        }
    }
}

/// `|Z_{n+1, h_i}|_p` from the closed form: exact powers, never floats.
pub fn normalizer_norm(
    n: u32,
    root: TiRoot,
    params: &ModelParams,
) -> Result<NormalizerNorm, SolverError> {
    let h = root_value(root, params)?;
    let base = recursion_base(&h, params)?;
    let reps = pow2_exponent(n)? - 1; // 2^(n-1) - 1
    let norm = base.norm().pow(reps);
    let bound = match root {
        TiRoot::H3 | TiRoot::H4 => {
            let theta_minus_one = params.theta.sub(&params.ctx.one())?;
            let v = theta_minus_one
                .valuation()
                .expect("theta is not 1 for a nonzero coupling");
            Some(PadicNorm::power(params.prime(), -v * (2 * reps)))
        }
        _ => None,
    };
    let within_bound = match (&bound, norm.exponent()) {
        (Some(b), Some(e)) => b.exponent().is_some_and(|be| e <= be),
        _ => true,
    };
    Ok(NormalizerNorm {
        level: n,
        root,
        norm,
        bound,
        within_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
}

/// Boundedness of the measure attached to a root: only the h = 1 measure at
/// odd p is bounded; at p = 2 even that one grows.
pub fn boundedness(root: TiRoot, params: &ModelParams) -> Result<Boundedness, SolverError> {
    if !root.exists_for(params.prime()) {
        return Err(SolverError::RootDoesNotExist(root.index()));
    }
    Ok(match root {
        TiRoot::H1 if params.prime() != 2 => Boundedness::Bounded,
        _ => Boundedness::Unbounded,
    })
}

/// `|mu^(n)(sigma)|_p` from the norm formulas: the boundary and interaction
/// factors are units, so the measure norm is the inverse normalizer norm.
pub fn measure_norm(n: u32, root: TiRoot, params: &ModelParams) -> Result<PadicNorm, SolverError> {
    let h = root_value(root, params)?;
    let base = recursion_base(&h, params)?;
    Ok(base.norm().pow(-(pow2_exponent(n)? - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transition {
    Unique,
    PhaseTransition,
    StrongPhaseTransition,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Transition::Unique => "unique",
            Transition::PhaseTransition => "phase_transition",
            Transition::StrongPhaseTransition => "strong_phase_transition",
        };
        f.write_str(s)
    }
}

/// Phase-transition verdict plus the ART-backed at-least-three-measures flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub transition: Transition,
    /// For k >= 3 and p = 1 mod 4 the two planted boundary fields together
    /// with h = 1 give at least three distinct measures (for k = 2 the three
    /// constant solutions do).
    pub at_least_three_measures: bool,
}

/// The verdict for one (p, J, k).
///
/// On the order-3 tree a strong transition occurs whenever p = 1 mod 4: the
/// h = 1 measure is bounded while every further root gives an unbounded one.
/// For other orders only the existence side is known here: at least three
/// measures when p = 1 mod 4, a single constructed measure otherwise.
pub fn transition_verdict(params: &ModelParams) -> Result<Verdict, SolverError> {
    let p = params.prime();
    let several = p % 4 == 1;
    let transition = match params.order {
        3 if several => Transition::StrongPhaseTransition,
        _ if several => Transition::PhaseTransition,
        _ => Transition::Unique,
    };
    Ok(Verdict {
        transition,
        at_least_three_measures: several && params.order >= 2,
    })
}

/// Residue data used by the congruence classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Residues {
    pub mod4: u8,
    pub mod3: u8,
    pub mod6: u8,
    pub mod12: u8,
}

impl Residues {
    pub fn of(p: u64) -> Self {
        Residues {
            mod4: (p % 4) as u8,
            mod3: (p % 3) as u8,
            mod6: (p % 6) as u8,
            mod12: (p % 12) as u8,
        }
    }
}

/// |TIpGGM| by the congruence table alone.
pub fn congruence_measure_count(p: u64) -> usize {
    if p % 4 != 1 {
        1
    } else if p % 3 == 2 {
        2
    } else {
        4
    }
}

/// N_p (solutions of the order-3 fixed-point equation) by congruences alone.
pub fn congruence_solution_count(p: u64) -> usize {
    2 * congruence_measure_count(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossCheck {
    Agree,
    Skipped,
    Disagree { congruence: usize, direct: usize },
}

impl fmt::Display for CrossCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossCheck::Agree => f.write_str("agree"),
            CrossCheck::Skipped => f.write_str("skipped"),
            CrossCheck::Disagree { congruence, direct } => {
                write!(f, "congruence={} direct={}", congruence, direct)
            }
        }
    }
}

/// Per-prime classification of the order-3 translation-invariant measures.
#[derive(Debug, Clone)]
pub struct Classification {
    pub prime: u64,
    pub residues: Residues,
    /// Solution count of the fixed-point equation.
    pub n_p: usize,
    /// Measure count after the +-h identification.
    pub measure_count: usize,
    /// Boundedness per existing root, in root order.
    pub boundedness: Vec<(TiRoot, Boundedness)>,
    pub verdict: Transition,
    pub crosscheck: CrossCheck,
}

/// Classifies one prime at the default precision, cross-checking the
/// congruence table against direct root extraction.
pub fn classify(prime: u64, coupling: Coupling) -> Result<Classification, SolverError> {
    classify_at(prime, coupling, PadicContext::DEFAULT_PRECISION, true)
}

pub fn classify_at(
    prime: u64,
    coupling: Coupling,
    precision: u32,
    crosscheck: bool,
) -> Result<Classification, SolverError> {
    let params = ModelParams::with_precision(prime, coupling, 3, precision)?;
    let congruence = congruence_measure_count(prime);
    let check = if crosscheck {
        let sols = solve_k3(&params)?;
        let direct = sols.measure_count();
        if direct == congruence {
            CrossCheck::Agree
        } else {
            CrossCheck::Disagree { congruence, direct }
        }
    } else {
        CrossCheck::Skipped
    };
    let boundedness = TiRoot::ALL
        .iter()
        .filter(|r| r.exists_for(prime))
        .map(|&r| boundedness(r, &params).map(|b| (r, b)))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = transition_verdict(&params)?.transition;
    Ok(Classification {
        prime,
        residues: Residues::of(prime),
        n_p: 2 * congruence,
        measure_count: congruence,
        boundedness,
        verdict,
        crosscheck: check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, k: u32) -> ModelParams {
        ModelParams::new(p, Coupling::canonical(p), k).unwrap()
    }

    #[test]
    fn theta_leading_digits() {
        // exp(2*5) = 1 + 10 mod 25
        let m = params(5, 3);
        let expected = m.context().integer(11);
        assert!(m.theta().eq_mod(&expected, 2).unwrap());
        assert!(functions::in_exp_group(m.theta()));
    }

    #[test]
    fn coupling_bound_enforced() {
        assert!(matches!(
            ModelParams::new(5, Coupling::integer(1), 3),
            Err(SolverError::CouplingOutOfRange)
        ));
        assert!(matches!(
            ModelParams::new(2, Coupling::new(1, 2).unwrap(), 3),
            Err(SolverError::CouplingOutOfRange)
        ));
        assert!(matches!(
            ModelParams::new(2, Coupling::integer(2), 3),
            Err(SolverError::CouplingOutOfRange)
        ));
        assert!(ModelParams::new(2, Coupling::integer(4), 3).is_ok());
    }

    #[test]
    fn solve_k2_counts() {
        // unique solution when p != 1 mod 4, three otherwise
        let sols7 = solve_k2(&params(7, 2)).unwrap();
        assert_eq!(sols7.representative_count(), 1);

        let sols5 = solve_k2(&params(5, 2)).unwrap();
        assert_eq!(sols5.representative_count(), 3);
        let m = params(5, 2);
        for h in sols5.h_roots() {
            assert!(residual_norm(h, &m).unwrap().certifies_at_most(28));
        }
    }

    #[test]
    fn solve_k2_norms_at_13() {
        let m = params(13, 2);
        let sols = solve_k2(&m).unwrap();
        assert_eq!(sols.representative_count(), 3);
        for h in sols.h_roots() {
            assert!(h.norm().is_one());
            assert!(residual_norm(h, &m).unwrap().certifies_at_most(28));
        }
    }

    #[test]
    fn solve_k3_counts_by_congruence() {
        assert_eq!(solve_k3(&params(7, 3)).unwrap().solution_count(), 2);
        assert_eq!(solve_k3(&params(5, 3)).unwrap().solution_count(), 4);
        assert_eq!(solve_k3(&params(13, 3)).unwrap().solution_count(), 8);
        assert_eq!(solve_k3(&params(2, 3)).unwrap().solution_count(), 2);
    }

    #[test]
    fn solve_k3_residuals_and_negation() {
        let m = params(13, 3);
        let sols = solve_k3(&m).unwrap();
        let tol = m.context().working_precision() as i64 - 4;
        for h in sols.signed_h_roots() {
            let bound = residual_norm(&h, &m).unwrap();
            assert!(
                bound.certifies_at_most(tol),
                "residual too large: {bound:?}"
            );
            assert!(h.norm().is_one());
        }
    }

    #[test]
    fn z3_frozen_digits_at_13() {
        let m = params(13, 3);
        let sols = solve_k3(&m).unwrap();
        let z3 = &sols.z_roots()[2];
        assert_eq!(z3.digits(4).unwrap(), vec![12, 11, 2, 4]);
        // |z_3 + 1| = |theta - 1| = 1/13
        let shifted = z3.add(&m.context().one()).unwrap();
        assert_eq!(shifted.valuation(), Some(1));
        // z_3 z_4 = 1
        let prod = z3.mul(&sols.z_roots()[3]).unwrap();
        assert!(prod.eq_mod(&m.context().one(), 30).unwrap());
    }

    #[test]
    fn h3_frozen_digits_at_13() {
        let m = params(13, 3);
        let h3 = root_value(TiRoot::H3, &m).unwrap();
        assert_eq!(h3.digits(4).unwrap(), vec![5, 1, 4, 11]);
    }

    #[test]
    fn delta_square_iff_one_mod_six() {
        for (p, expect) in [
            (7u64, true),
            (5, false),
            (13, true),
            (11, false),
            (19, true),
        ] {
            let m = params(p, 3);
            assert_eq!(sqrt_delta_exists(&m).unwrap(), expect, "p={}", p);
            assert_eq!(expect, p % 6 == 1);
        }
        // Delta(theta) sits next to -3: |Delta + 3| < 1
        let m = params(13, 3);
        let delta = m
            .theta()
            .mul(m.theta())
            .unwrap()
            .sub(&m.context().integer(4))
            .unwrap();
        let shifted = delta.add(&m.context().integer(3)).unwrap();
        assert!(shifted.valuation().unwrap() >= 1);
    }

    #[test]
    fn z3_square_iff_one_mod_twelve() {
        assert!(sqrt_z3_exists(&params(13, 3)).unwrap());
        assert!(!sqrt_z3_exists(&params(7, 3)).unwrap()); // 7 = 1 mod 6, not mod 4
        assert!(sqrt_z3_exists(&params(37, 3)).unwrap());
        assert!(matches!(
            sqrt_z3_exists(&params(5, 3)),
            Err(SolverError::DeltaNotSquare)
        ));
    }

    #[test]
    fn recursion_factor_telescopes_to_closed_form() {
        let m = params(13, 3);
        for root in [TiRoot::H1, TiRoot::H2, TiRoot::H3] {
            let h = root_value(root, &m).unwrap();
            for n in 2..=6u32 {
                let mut z = m.context().one();
                for level in 1..n {
                    z = z.mul(&recursion_factor(level, &h, &m).unwrap()).unwrap();
                }
                let closed = closed_form_normalizer(n, &h, &m).unwrap();
                assert_eq!(z.norm(), closed.norm());
                assert!(z.eq_mod(&closed, 10).unwrap());
            }
        }
    }

    #[test]
    fn recursion_factor_norms() {
        // |A_{n,h}| = 1 for h = 1 at odd p; |A_{n,h_2}| = |theta-1|^(2^n)
        let m = params(13, 3);
        let one = m.context().one();
        for n in 1..=5u32 {
            assert!(recursion_factor(n, &one, &m).unwrap().norm().is_one());
            let h2 = root_value(TiRoot::H2, &m).unwrap();
            let a = recursion_factor(n, &h2, &m).unwrap();
            assert_eq!(a.norm().exponent(), Some(-(1i64 << n)), "n={}", n);
        }
    }

    #[test]
    fn normalizer_norm_h1() {
        // |Z_{n+1,h_1}| = 1 for odd p, 2^(-2^n + 2) at p = 2
        let m5 = params(5, 3);
        for n in 1..=10 {
            assert!(normalizer_norm(n, TiRoot::H1, &m5).unwrap().norm.is_one());
        }
        let m2 = params(2, 3);
        for (n, e) in [(1u32, 0i64), (2, -2), (3, -6), (4, -14)] {
            let r = normalizer_norm(n, TiRoot::H1, &m2).unwrap();
            assert_eq!(r.norm.exponent(), Some(e), "n={}", n);
        }
    }

    #[test]
    fn normalizer_norm_h2_and_bounds() {
        let m = params(13, 3);
        // |Z_{n+1,h_2}| = |theta-1|^(2^n - 2) with v(theta-1) = 1 at J = 13
        let r = normalizer_norm(3, TiRoot::H2, &m).unwrap();
        assert_eq!(r.norm.exponent(), Some(-6));
        for root in [TiRoot::H3, TiRoot::H4] {
            for n in 1..=6 {
                let r = normalizer_norm(n, root, &m).unwrap();
                assert!(r.within_bound, "root {:?} level {}", root, n);
                assert!(r.bound.is_some());
            }
        }
        assert!(matches!(
            normalizer_norm(2, TiRoot::H3, &params(5, 3)),
            Err(SolverError::RootDoesNotExist(3))
        ));
    }

    #[test]
    fn boundedness_table() {
        assert_eq!(
            boundedness(TiRoot::H1, &params(5, 3)).unwrap(),
            Boundedness::Bounded
        );
        assert_eq!(
            boundedness(TiRoot::H1, &params(2, 3)).unwrap(),
            Boundedness::Unbounded
        );
        assert_eq!(
            boundedness(TiRoot::H2, &params(13, 3)).unwrap(),
            Boundedness::Unbounded
        );
    }

    #[test]
    fn measure_norms_growth() {
        let m = params(13, 3);
        // bounded measure: norm 1 at every level
        for n in 1..=8 {
            assert!(measure_norm(n, TiRoot::H1, &m).unwrap().is_one());
        }
        // unbounded: strictly increasing norm exponents
        let mut last = 0i64;
        for n in 2..=8 {
            let e = measure_norm(n, TiRoot::H2, &m).unwrap().exponent().unwrap();
            assert!(e > last, "n={} exponent {}", n, e);
            last = e;
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            transition_verdict(&params(13, 3)).unwrap().transition,
            Transition::StrongPhaseTransition
        );
        assert_eq!(
            transition_verdict(&params(7, 3)).unwrap().transition,
            Transition::Unique
        );
        let v = transition_verdict(&params(5, 4)).unwrap();
        assert!(v.at_least_three_measures);
        assert_eq!(v.transition, Transition::PhaseTransition);
        assert_eq!(
            transition_verdict(&params(2, 3)).unwrap().transition,
            Transition::Unique
        );
    }

    #[test]
    fn classify_small_primes() {
        for (p, count) in [
            (2u64, 1usize),
            (3, 1),
            (5, 2),
            (7, 1),
            (11, 1),
            (13, 4),
            (17, 2),
            (19, 1),
        ] {
            let c = classify(p, Coupling::canonical(p)).unwrap();
            assert_eq!(c.measure_count, count, "p={}", p);
            assert_eq!(c.crosscheck, CrossCheck::Agree, "p={}", p);
            assert_eq!(c.n_p, 2 * count);
        }
    }

    #[test]
    fn classify_p2_unbounded() {
        let c = classify(2, Coupling::canonical(2)).unwrap();
        assert_eq!(c.boundedness, vec![(TiRoot::H1, Boundedness::Unbounded)]);
        assert_eq!(c.verdict, Transition::Unique);
    }
}
