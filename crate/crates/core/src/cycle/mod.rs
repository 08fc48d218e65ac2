//! Theta cycles: closed forms, degenerate cycles and a constraint solver.

mod closed_form;
mod solver;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Prime;

pub use closed_form::cycle_closed_form;
pub use solver::cycle_solver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("k = {k} has residue k0 = {k0}, excluded because k0 = {excluded}")]
    CongruenceExcluded { k: i64, k0: i64, excluded: &'static str },
    #[error("first step undetermined: p divides (k0+1)(2k0-1) for k0 = {k0}")]
    IndeterminateStep { k0: i64 },
    #[error("no closed form for r = {r}; use the solver")]
    UnsupportedClosedForm { r: i64 },
    #[error("invalid cycle input: {0}")]
    InvalidInput(String),
}

/// Which congruence produced a low point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum LowPointType {
    /// previous value `v` with `v + r ≡ 0 (mod p)`
    First,
    /// previous value `v` with `2v - 1 ≡ 0 (mod p)`
    Second,
}

impl From<LowPointType> for u8 {
    fn from(t: LowPointType) -> u8 {
        match t {
            LowPointType::First => 1,
            LowPointType::Second => 2,
        }
    }
}

impl TryFrom<u8> for LowPointType {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(LowPointType::First),
            2 => Ok(LowPointType::Second),
            _ => Err(format!("low point type must be 1 or 2, got {v}")),
        }
    }
}

impl LowPointType {
    pub fn triggers(self, p: i64, r: i64, v: i64) -> bool {
        match self {
            LowPointType::First => (v + r).rem_euclid(p) == 0,
            LowPointType::Second => (2 * v - 1).rem_euclid(p) == 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LowPoint {
    #[serde(rename = "type")]
    pub kind: LowPointType,
    /// Number of steps in the run ending at this low point.
    pub low_number: i64,
    /// Size of the drop in units of `p - 1`.
    pub jumping_number: i64,
    /// Second entry of the filtration at the low point itself.
    pub anchor: i64,
}

impl LowPoint {
    pub fn new(kind: LowPointType, c: i64, b: i64, anchor: i64) -> Self {
        LowPoint {
            kind,
            low_number: c,
            jumping_number: b,
            anchor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Solver,
    Degenerate,
}

/// Second entries of the filtrations along a theta cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleResult {
    pub p: Prime,
    pub r: i64,
    pub k: i64,
    pub semi_ordinary: bool,
    pub values: Vec<i64>,
    pub low_points: Vec<LowPoint>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<String>,
}

/// `k0` in `1..=p` with `k ≡ k0 (mod p)`.
pub fn residue(p: Prime, k: i64) -> i64 {
    (k - 1).rem_euclid(p.as_i64()) + 1
}

/// Number of entries in a cycle.
pub fn cycle_length(p: Prime) -> usize {
    if p.is_odd() {
        (p.get() as usize - 1) / 2
    } else {
        1
    }
}

/// Checks basic ranges and, for odd `p`, `r = 1` and non-semi-ordinary forms,
/// the excluded residues `1`, `(p+3)/2` and `p`.
pub fn validate_cycle_input(p: Prime, r: i64, k: i64, semi_ordinary: bool) -> Result<(), CycleError> {
    if r < 0 {
        return Err(CycleError::InvalidInput(format!("r must be non-negative, got {r}")));
    }
    if k < 1 {
        return Err(CycleError::InvalidInput(format!("k must be positive, got {k}")));
    }
    if !p.is_odd() || r != 1 || semi_ordinary {
        return Ok(());
    }
    let q = p.as_i64();
    let k0 = residue(p, k);
    let excluded = if k0 == 1 {
        Some("1")
    } else if k0 == (q + 3) / 2 {
        Some("(p+3)/2")
    } else if k0 == q {
        Some("p")
    } else {
        None
    };
    match excluded {
        Some(excluded) => Err(CycleError::CongruenceExcluded { k, k0, excluded }),
        None => Ok(()),
    }
}

/// Position of `w` in the cycle: `(j, false)` if `w ≡ 2j`, `(j, true)` if
/// `w ≡ 2j + 1 (mod p - 1)`, with `0 <= j < (p-1)/2`.
pub fn selector(p: Prime, w: i64) -> Result<(i64, bool), CycleError> {
    if !p.is_odd() {
        return Err(CycleError::InvalidInput("selector needs an odd prime".into()));
    }
    let rho = w.rem_euclid(p.as_i64() - 1);
    Ok(if rho % 2 == 0 {
        (rho / 2, false)
    } else {
        ((rho - 1) / 2, true)
    })
}

/// Applies one run of `c` steps from `anchor`: `c - 1` steps of `+(p+1)` and a
/// final step of `+(p+1) - b(p-1)`. Appends the produced values.
pub(crate) fn run_values(p: i64, anchor: i64, c: i64, b: i64, out: &mut Vec<i64>) -> i64 {
    let mut v = anchor;
    for _ in 1..c {
        v += p + 1;
        out.push(v);
    }
    v += (p + 1) - b * (p - 1);
    out.push(v);
    v
}
