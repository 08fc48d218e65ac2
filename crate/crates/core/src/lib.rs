//! Exact arithmetic for mod-p Siegel modular forms of degree 2.
//!
//! * [`arith`]: primes, weights, half-integral matrices and F_p.
//! * [`qexp`]: truncated q-expansions and the theta operator on them.
//! * [`symbolic`]: the local coefficient formulas of theta, transcribed and re-derived.
//! * [`cycle`]: theta cycles and their low points.
//! * [`serre`]: classical Serre weights.
//! * [`cli`]: the JSON command-line front end.

pub mod arith;
pub mod cli;
pub mod cycle;
pub mod error;
pub mod qexp;
pub mod serre;
pub mod symbolic;

pub use error::{Error, Result};
