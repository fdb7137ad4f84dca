//! Exact p-adic arithmetic and the full classification of translation-
//! invariant generalized Gibbs measures for the Ising model on Cayley trees
//! of orders two and three, with planted boundary fields for orders three and
//! up.
//!
//! The crate is organized around five layers:
//!
//! - [`padic`]: tracked-precision arithmetic on Q_p with exact norms;
//! - [`functions`]: exp, log, square roots with solvability tests;
//! - [`ti`]: the translation-invariant fixed-point solver, congruence
//!   classifier, normalizer norms, boundedness and phase-transition verdicts;
//! - [`tree`]: finite Cayley trees, spin configurations, and the brute-force
//!   enumeration oracle for the consistency condition;
//! - [`art`]: boundary fields that plant the order-2 solution inside larger
//!   trees;
//! - [`census`]: per-prime classification rows and machine-readable output.
//!
//! Runnable walkthroughs for each capability live under `examples/`; the
//! thin `padic-ising` binary exposes the same drivers as subcommands.

pub mod art;
pub mod census;
pub mod functions;
pub mod padic;
pub mod ti;
pub mod tree;

pub use padic::{PadicContext, PadicError, PadicNorm, PadicNumber};
