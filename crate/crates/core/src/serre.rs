//! Classical Serre weights from a description of the local representation at p.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{delta_p, Prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerreError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("ramification flags incompatible with parameters: {0}")]
    Ramification(String),
    #[error("wrong Klingen case: {0}")]
    KlingenCase(String),
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("no shift of ({a},{b}) by multiples of (p-1,p-1) lands in 0 <= b < a <= p")]
    NoValidRepresentative { a: i64, b: i64 },
}

/// Ramification class of a local extension class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RamFlag {
    Peu,
    Ramified,
    Tres,
}

impl RamFlag {
    pub const ALL: [RamFlag; 3] = [RamFlag::Peu, RamFlag::Ramified, RamFlag::Tres];
}

/// `p - 1` for ramified and très ramifiée classes, `0` otherwise.
pub fn r_value(p: Prime, flag: RamFlag) -> i64 {
    match flag {
        RamFlag::Peu => 0,
        RamFlag::Ramified | RamFlag::Tres => p.as_i64() - 1,
    }
}

/// A weight triple `(k1, k2, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SerreWeight {
    pub k1: i64,
    pub k2: i64,
    pub w: i64,
}

impl SerreWeight {
    pub fn new(k1: i64, k2: i64, w: i64) -> Self {
        SerreWeight { k1, k2, w }
    }

    /// Order comparing `k2`, then `k1`, then `w`.
    pub fn lex_cmp(&self, other: &SerreWeight) -> Ordering {
        (self.k2, self.k1, self.w).cmp(&(other.k2, other.k1, other.w))
    }
}

impl From<[i64; 3]> for SerreWeight {
    fn from([k1, k2, w]: [i64; 3]) -> Self {
        SerreWeight { k1, k2, w }
    }
}

impl From<SerreWeight> for [i64; 3] {
    fn from(s: SerreWeight) -> Self {
        [s.k1, s.k2, s.w]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BorelRam {
    pub b1: RamFlag,
    pub b2: RamFlag,
    pub b3: RamFlag,
    pub t0: RamFlag,
}

impl Default for BorelRam {
    fn default() -> Self {
        BorelRam {
            b1: RamFlag::Peu,
            b2: RamFlag::Peu,
            b3: RamFlag::Peu,
            t0: RamFlag::Peu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SiegelRam {
    pub t3: RamFlag,
}

/// For the split Klingen case the flag is the maximum over the three components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KlingenRam {
    #[serde(alias = "max")]
    pub t: RamFlag,
}

/// Which maximum enters the `a > b` Borel row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BorelVariant {
    /// Maximum over `b1, b2, b3`.
    #[default]
    Uniform,
    /// Maximum over `b2, b3` only.
    HodgeTatePair,
}

/// Local representation at p, reduced to the data entering the weight recipes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum LocalRepDescriptor {
    Borel {
        p: Prime,
        a: i64,
        b: i64,
        c: i64,
        #[serde(default)]
        ram: BorelRam,
        #[serde(default, skip_serializing_if = "is_uniform")]
        variant: BorelVariant,
    },
    Siegel {
        p: Prime,
        a: i64,
        b: i64,
        c: i64,
        ram: SiegelRam,
    },
    Klingen {
        p: Prime,
        a: i64,
        b: i64,
        c: i64,
        ram: KlingenRam,
    },
    Klingen2 {
        p: Prime,
        c: i64,
        ram: KlingenRam,
    },
    Endoscopic {
        p: Prime,
        candidates: Vec<[i64; 3]>,
    },
    Irreducible {
        p: Prime,
        a: i64,
        c: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        candidates: Option<Vec<[i64; 3]>>,
    },
}

fn is_uniform(v: &BorelVariant) -> bool {
    *v == BorelVariant::Uniform
}

fn shift(base: (i64, i64), add: (i64, i64), delta: crate::arith::Weight) -> (i64, i64) {
    (
        base.0 + add.0 + delta.k1(),
        base.1 + add.1 + delta.k2(),
    )
}

fn check_borel(p: Prime, a: i64, b: i64, ram: &BorelRam) -> Result<(), SerreError> {
    let q = p.as_i64();
    if !(0..=q - 2).contains(&a) || !(0..=q - 2).contains(&b) {
        return Err(SerreError::Range(format!(
            "Borel needs 0 <= a, b <= p-2, got a={a}, b={b}"
        )));
    }
    match ram.t0 {
        RamFlag::Tres if b != 1 => {
            return Err(SerreError::Ramification("t0 très ramifiée requires b = 1".into()))
        }
        RamFlag::Ramified if b != 0 => {
            return Err(SerreError::Ramification("t0 ramified requires b = 0".into()))
        }
        _ => {}
    }
    if a < b && ram.b3 != RamFlag::Peu && !((a, b) == (0, q - 2) && ram.b3 == RamFlag::Tres) {
        return Err(SerreError::Ramification(
            "for a < b, b3 can only be très ramifiée and only at (a,b) = (0,p-2)".into(),
        ));
    }
    Ok(())
}

/// Borel ordinary weight. `w = c`; `(k1, k2)` by the three rows `a > b`, `a = b`, `a < b`.
pub fn serre_weight_borel(
    p: Prime,
    a: i64,
    b: i64,
    c: i64,
    ram: &BorelRam,
    variant: BorelVariant,
) -> Result<SerreWeight, SerreError> {
    check_borel(p, a, b, ram)?;
    let q = p.as_i64();
    let r = |f| r_value(p, f);
    let rt0 = r(ram.t0);
    let zero = delta_p(p, 0, 1);
    let (k1, k2) = match a.cmp(&b) {
        Ordering::Greater => {
            let rmax = match variant {
                BorelVariant::Uniform => r(ram.b1).max(r(ram.b2)).max(r(ram.b3)),
                BorelVariant::HodgeTatePair => r(ram.b2).max(r(ram.b3)),
            };
            shift((1, 2), (a + rmax + rt0, b + rt0), delta_p(p, b, 0))
        }
        Ordering::Equal => shift((1, 2), (a + q - 1 + rt0, a + rt0), delta_p(p, a, 0)),
        Ordering::Less => shift((1, 2), (a + q - 1 + r(ram.b3) + rt0, b + rt0), zero),
    };
    Ok(SerreWeight::new(k1, k2, c))
}

fn check_two_dim(p: Prime, a: i64, b: i64) -> Result<(), SerreError> {
    if !(0 <= b && b < a && a <= p.as_i64()) {
        return Err(SerreError::Range(format!(
            "need 0 <= b < a <= p, got a={a}, b={b}"
        )));
    }
    Ok(())
}

/// Siegel ordinary weight: `(1,2) + (a + r, b + r) + δ_{b0}`, `w = c`.
pub fn serre_weight_siegel(p: Prime, a: i64, b: i64, c: i64, t3: RamFlag) -> Result<SerreWeight, SerreError> {
    check_two_dim(p, a, b)?;
    if !(0..=p.as_i64() - 2).contains(&c) {
        return Err(SerreError::Range(format!("Siegel needs 0 <= c <= p-2, got c={c}")));
    }
    let r = r_value(p, t3);
    let (k1, k2) = shift((1, 2), (a + r, b + r), delta_p(p, b, 0));
    Ok(SerreWeight::new(k1, k2, c))
}

/// Whether `(a, b)` falls in the split Klingen case `(p+1) | 2(a-b)`.
pub fn klingen_is_split(p: Prime, a: i64, b: i64) -> bool {
    (2 * (a - b)) % (p.as_i64() + 1) == 0
}

fn klingen_formula(p: Prime, a: i64, b: i64, c: i64, r: i64) -> SerreWeight {
    let q = p.as_i64();
    let w = if 2 * b > c - r {
        SerreWeight::new(1 + a + b - c + r, 2 + a - b, c - r - a)
    } else {
        SerreWeight::new(1 + a + b + 2 * (q - 1) - c + r, 2 + a - b, c - r - a - (q - 1))
    };
    if w.k1 < w.k2 {
        log::warn!("Klingen weight ({}, {}, {}) has k1 < k2 for c = {c}", w.k1, w.k2, w.w);
    }
    w
}

/// Klingen ordinary weight, irreducible case `(p+1) ∤ 2(a-b)`.
pub fn serre_weight_klingen_generic(p: Prime, a: i64, b: i64, c: i64, t: RamFlag) -> Result<SerreWeight, SerreError> {
    check_two_dim(p, a, b)?;
    if klingen_is_split(p, a, b) {
        return Err(SerreError::KlingenCase(format!(
            "(p+1) divides 2(a-b) for a={a}, b={b}; use the split case"
        )));
    }
    Ok(klingen_formula(p, a, b, c, r_value(p, t)))
}

/// Klingen ordinary weight, split case `a - b = (p+1)/2`; `ram_max` is the
/// maximal class among the three components.
pub fn serre_weight_klingen_split(p: Prime, a: i64, b: i64, c: i64, ram_max: RamFlag) -> Result<SerreWeight, SerreError> {
    check_two_dim(p, a, b)?;
    if !p.is_odd() || 2 * (a - b) != p.as_i64() + 1 {
        return Err(SerreError::KlingenCase(format!(
            "split case needs a - b = (p+1)/2, got a={a}, b={b}"
        )));
    }
    Ok(klingen_formula(p, a, b, c, r_value(p, ram_max)))
}

/// Dispatches to the generic or split Klingen formula according to `(a, b)`.
pub fn serre_weight_klingen(p: Prime, a: i64, b: i64, c: i64, t: RamFlag) -> Result<SerreWeight, SerreError> {
    if p.is_odd() && klingen_is_split(p, a, b) {
        serre_weight_klingen_split(p, a, b, c, t)
    } else {
        serre_weight_klingen_generic(p, a, b, c, t)
    }
}

/// Klingen weight for `p = 2`, where `(a, b) = (1, 0)`.
pub fn serre_weight_klingen_p2(c: i64, ram: RamFlag) -> SerreWeight {
    let two = Prime::new(2).expect("2 is prime");
    klingen_formula(two, 1, 0, c, r_value(two, ram))
}

/// Minimum under the order comparing `k2`, then `k1`, then `w`.
pub fn sw_min(candidates: &[SerreWeight]) -> Result<SerreWeight, SerreError> {
    candidates
        .iter()
        .min_by(|x, y| x.lex_cmp(y))
        .copied()
        .ok_or(SerreError::EmptyCandidates)
}

/// Shifts `(a, b)` by `m(p-1, p-1)` into `0 <= b' < a' <= p`, using the smallest such `m`.
///
/// The representative is unique except when `a - b = 1`, where both `(1, 0)`
/// and `(p, p-1)` qualify.
pub fn omega2_normalize(p: Prime, a: i64, b: i64) -> Result<(i64, i64), SerreError> {
    let q = p.as_i64();
    let step = q - 1;
    if a <= b || a - b > q {
        return Err(SerreError::NoValidRepresentative { a, b });
    }
    // b + m·step >= 0 and a + m·step <= p
    let m_min = (-b).div_euclid(step) + i64::from((-b).rem_euclid(step) != 0);
    let m_max = (q - a).div_euclid(step);
    if m_min > m_max {
        return Err(SerreError::NoValidRepresentative { a, b });
    }
    Ok((a + m_min * step, b + m_min * step))
}

/// Base-p digits of `a mod (p^4 - 1)` and whether they are pairwise distinct.
pub fn omega4_digits(p: Prime, a: i64) -> ([i64; 4], bool) {
    let q = p.as_i64() as i128;
    let modulus = q.pow(4) - 1;
    let mut x = (a as i128).rem_euclid(modulus);
    let mut digits = [0i64; 4];
    for d in digits.iter_mut() {
        *d = (x % q) as i64;
        x /= q;
    }
    let distinct = (0..4).all(|i| (i + 1..4).all(|j| digits[i] != digits[j]));
    (digits, distinct)
}

impl LocalRepDescriptor {
    pub fn p(&self) -> Prime {
        match self {
            LocalRepDescriptor::Borel { p, .. }
            | LocalRepDescriptor::Siegel { p, .. }
            | LocalRepDescriptor::Klingen { p, .. }
            | LocalRepDescriptor::Klingen2 { p, .. }
            | LocalRepDescriptor::Endoscopic { p, .. }
            | LocalRepDescriptor::Irreducible { p, .. } => *p,
        }
    }

    /// The classical Serre weight of the described representation.
    pub fn serre_weight(&self) -> Result<SerreWeight, SerreError> {
        match self {
            LocalRepDescriptor::Borel { p, a, b, c, ram, variant } => {
                serre_weight_borel(*p, *a, *b, *c, ram, *variant)
            }
            LocalRepDescriptor::Siegel { p, a, b, c, ram } => serre_weight_siegel(*p, *a, *b, *c, ram.t3),
            LocalRepDescriptor::Klingen { p, a, b, c, ram } => serre_weight_klingen(*p, *a, *b, *c, ram.t),
            LocalRepDescriptor::Klingen2 { p, c, ram } => {
                if p.get() != 2 {
                    return Err(SerreError::Range(format!("klingen2 needs p = 2, got {p}")));
                }
                Ok(serre_weight_klingen_p2(*c, ram.t))
            }
            LocalRepDescriptor::Endoscopic { candidates, .. } => {
                sw_min(&candidates.iter().map(|&c| c.into()).collect::<Vec<_>>())
            }
            LocalRepDescriptor::Irreducible { candidates, .. } => match candidates {
                Some(cs) => sw_min(&cs.iter().map(|&c| c.into()).collect::<Vec<_>>()),
                None => Err(SerreError::EmptyCandidates),
            },
        }
    }
}
