//! Shared exact arithmetic: primes, weights, half-integral matrices and F_p.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a prime")]
    NotPrime(i64),
    #[error("prime {0} is too large (must fit in 32 bits)")]
    PrimeTooLarge(i64),
    #[error("weight ({k1},{k2}) violates k1 >= k2")]
    WeightOrder { k1: i64, k2: i64 },
    #[error("T-matrix ({a},{b},{c}) has a negative diagonal entry")]
    NegativeDiagonal { a: i64, b: i64, c: i64 },
}

/// A rational prime `p`, checked at construction.
///
/// Bounded by `u32::MAX` so that products of two reduced residues fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: i64) -> Result<Self, ArithError> {
        if p > u32::MAX as i64 {
            return Err(ArithError::PrimeTooLarge(p));
        }
        if p < 2 {
            return Err(ArithError::NotPrime(p));
        }
        let n = p as u64;
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return Err(ArithError::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Odd primes up to and including `bound`.
    pub fn odd_primes_up_to(bound: i64) -> Vec<Prime> {
        (3..=bound).filter_map(|n| Prime::new(n).ok()).collect()
    }
}

impl TryFrom<i64> for Prime {
    type Error = ArithError;
    fn try_from(p: i64) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for i64 {
    fn from(p: Prime) -> i64 {
        p.0 as i64
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A weight `(k1, k2)` with `k1 >= k2`. `k2` may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct Weight {
    k1: i64,
    k2: i64,
}

impl Weight {
    pub fn new(k1: i64, k2: i64) -> Result<Self, ArithError> {
        if k1 < k2 {
            return Err(ArithError::WeightOrder { k1, k2 });
        }
        Ok(Weight { k1, k2 })
    }

    /// The parallel weight `(k, k)`.
    pub fn parallel(k: i64) -> Self {
        Weight { k1: k, k2: k }
    }

    pub fn k1(self) -> i64 {
        self.k1
    }

    pub fn k2(self) -> i64 {
        self.k2
    }

    /// `r = k1 - k2`, the rank of the symmetric-power part.
    pub fn r(self) -> i64 {
        self.k1 - self.k2
    }

    /// Comparison with second entries compared first.
    pub fn lex_cmp(self, other: Weight) -> Ordering {
        (self.k2, self.k1).cmp(&(other.k2, other.k1))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight {
            k1: self.k1 + rhs.k1,
            k2: self.k2 + rhs.k2,
        }
    }
}

impl TryFrom<[i64; 2]> for Weight {
    type Error = ArithError;
    fn try_from(v: [i64; 2]) -> Result<Self, Self::Error> {
        Weight::new(v[0], v[1])
    }
}

impl From<Weight> for [i64; 2] {
    fn from(w: Weight) -> [i64; 2] {
        [w.k1, w.k2]
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

/// The half-integral symmetric matrix `[[2a, b], [b, 2c]]`, stored as `(a, b, c)`.
///
/// Equality and ordering are structural on `(a, b, c)`; no reduction is performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 3]", into = "[i64; 3]")]
pub struct TMatrix {
    a: i64,
    b: i64,
    c: i64,
}

impl TMatrix {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, ArithError> {
        if a < 0 || c < 0 {
            return Err(ArithError::NegativeDiagonal { a, b, c });
        }
        Ok(TMatrix { a, b, c })
    }

    pub fn zero() -> Self {
        TMatrix { a: 0, b: 0, c: 0 }
    }

    pub fn a(self) -> i64 {
        self.a
    }

    pub fn b(self) -> i64 {
        self.b
    }

    pub fn c(self) -> i64 {
        self.c
    }

    /// `a + c`, used as the truncation degree of q-expansions.
    pub fn trace(self) -> i64 {
        self.a + self.c
    }

    pub fn det(self) -> i64 {
        det_t(self)
    }

    pub fn is_psd(self) -> bool {
        self.a >= 0 && self.c >= 0 && self.det() >= 0
    }
}

impl Add for TMatrix {
    type Output = TMatrix;
    fn add(self, rhs: TMatrix) -> TMatrix {
        TMatrix {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
        }
    }
}

impl TryFrom<[i64; 3]> for TMatrix {
    type Error = ArithError;
    fn try_from(v: [i64; 3]) -> Result<Self, Self::Error> {
        TMatrix::new(v[0], v[1], v[2])
    }
}

impl From<TMatrix> for [i64; 3] {
    fn from(t: TMatrix) -> [i64; 3] {
        [t.a, t.b, t.c]
    }
}

impl fmt::Display for TMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// An element of F_p in canonical representative `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    modulus: Prime,
}

impl FpElem {
    pub fn new(value: i64, modulus: Prime) -> Self {
        let value = value.rem_euclid(modulus.as_i64()) as u64;
        FpElem { value, modulus }
    }

    pub fn zero(modulus: Prime) -> Self {
        FpElem { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        FpElem { value: 1, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let p = self.modulus.get();
        let mut base = self.value;
        let mut acc = 1 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        FpElem {
            value: acc,
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus.get() - 2))
        }
    }
}

impl Add for FpElem {
    type Output = FpElem;
    fn add(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get();
        FpElem {
            value: (self.value + rhs.value) % p,
            modulus: self.modulus,
        }
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        self + (-rhs)
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        let p = self.modulus.get();
        FpElem {
            value: (p - self.value) % p,
            modulus: self.modulus,
        }
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FpElem {
            value: self.value * rhs.value % self.modulus.get(),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Weight shift applied by the big theta operator on top of `(2, 2)`.
pub fn m_shift(p: Prime, w: Weight) -> Weight {
    let p = p.as_i64();
    if p == 2 {
        Weight::parallel(0)
    } else if w.r() <= 1 {
        Weight::parallel(p - 1)
    } else {
        Weight::parallel(2 * p - 2)
    }
}

/// Target weight of the big theta operator: `w + (2,2) + m_shift(p, w)`.
pub fn theta_target_weight(p: Prime, w: Weight) -> Weight {
    w + Weight::parallel(2) + m_shift(p, w)
}

/// `w1 <= w2` with second entries compared first.
pub fn weight_lex_le(w1: Weight, w2: Weight) -> bool {
    w1.lex_cmp(w2) != Ordering::Greater
}

/// `det T = 4ac - b^2`.
pub fn det_t(t: TMatrix) -> i64 {
    4 * t.a * t.c - t.b * t.b
}

/// `(p-1, p-1)` when `i == j`, else `(0, 0)`.
pub fn delta_p(p: Prime, i: i64, j: i64) -> Weight {
    if i == j {
        Weight::parallel(p.as_i64() - 1)
    } else {
        Weight::parallel(0)
    }
}
