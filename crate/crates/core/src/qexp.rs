//! Truncated q-expansions over F_p and the action of the theta operator on them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{det_t, theta_target_weight, ArithError, FpElem, Prime, TMatrix, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QExpError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("level N={level} must be at least 3 and prime to p={p}")]
    InvalidLevel { level: i64, p: u64 },
    #[error("max_trace must be non-negative, got {0}")]
    NegativeTruncation(i64),
    #[error("T-matrix {0} is not positive semidefinite")]
    NotPsd(TMatrix),
    #[error("T-matrix {t} has trace above max_trace={max_trace}")]
    OutsideTruncation { t: TMatrix, max_trace: i64 },
    #[error("T-matrix {0} appears twice")]
    DuplicateT(TMatrix),
    #[error("coefficient vector at {t} has length {got}, expected {expected}")]
    VectorLength { t: TMatrix, got: usize, expected: usize },
    #[error("coefficient {value} at {t} is not a residue in [0, {p})")]
    CoefficientRange { t: TMatrix, value: i64, p: u64 },
    #[error("operands differ in {0}")]
    Mismatch(&'static str),
    #[error("product of two vector-valued expansions is not supported")]
    VectorProduct,
}

/// All positive semidefinite `T` with `a + c <= max_trace`, in sorted order.
pub fn psd_support(max_trace: i64) -> Vec<TMatrix> {
    let mut out = Vec::new();
    for a in 0..=max_trace {
        for c in 0..=(max_trace - a) {
            let bound = (4 * a * c).isqrt();
            for b in -bound..=bound {
                if let Ok(t) = TMatrix::new(a, b, c) {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// A q-expansion truncated by the trace `a + c` of the index `T`.
///
/// Each stored vector has `r + 1` entries in `[0, p)`, the entry at position
/// `n` being the `δ_n` component. Zero vectors are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    p: Prime,
    level: i64,
    weight: Weight,
    max_trace: i64,
    coeffs: BTreeMap<TMatrix, Vec<u64>>,
}

impl QExpansion {
    /// The zero expansion.
    pub fn zero(p: Prime, level: i64, weight: Weight, max_trace: i64) -> Result<Self, QExpError> {
        if level < 3 || level % p.as_i64() == 0 {
            return Err(QExpError::InvalidLevel { level, p: p.get() });
        }
        if max_trace < 0 {
            return Err(QExpError::NegativeTruncation(max_trace));
        }
        if weight.k2() < 0 {
            log::warn!("weight {weight} has negative k2; such spaces vanish once |k2| is large");
        }
        Ok(QExpansion {
            p,
            level,
            weight,
            max_trace,
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds an expansion from integer coefficients, reduced mod p. Terms
    /// beyond the truncation are dropped; repeated `T` are summed.
    pub fn from_terms<I>(
        p: Prime,
        level: i64,
        weight: Weight,
        max_trace: i64,
        terms: I,
    ) -> Result<Self, QExpError>
    where
        I: IntoIterator<Item = (TMatrix, Vec<i64>)>,
    {
        let mut f = QExpansion::zero(p, level, weight, max_trace)?;
        let len = f.vector_len();
        for (t, v) in terms {
            if !t.is_psd() {
                return Err(QExpError::NotPsd(t));
            }
            if v.len() != len {
                return Err(QExpError::VectorLength {
                    t,
                    got: v.len(),
                    expected: len,
                });
            }
            if t.trace() > max_trace {
                continue;
            }
            let v: Vec<u64> = v.iter().map(|&x| FpElem::new(x, p).value()).collect();
            f.accumulate(t, &v);
        }
        Ok(f)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn max_trace(&self) -> i64 {
        self.max_trace
    }

    /// Length `r + 1` of every coefficient vector.
    pub fn vector_len(&self) -> usize {
        self.weight.r() as usize + 1
    }

    pub fn coeffs(&self) -> &BTreeMap<TMatrix, Vec<u64>> {
        &self.coeffs
    }

    /// Coefficient vector at `T`, or `None` when it is zero.
    pub fn coefficient(&self, t: TMatrix) -> Option<&[u64]> {
        self.coeffs.get(&t).map(Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn accumulate(&mut self, t: TMatrix, v: &[u64]) {
        let p = self.p.get();
        let slot = self
            .coeffs
            .entry(t)
            .or_insert_with(|| vec![0; v.len()]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s = (*s + x) % p;
        }
        if slot.iter().all(|&x| x == 0) {
            self.coeffs.remove(&t);
        }
    }

    fn map_vectors(&self, weight: Weight, f: impl Fn(TMatrix, &[u64]) -> Vec<u64>) -> QExpansion {
        let mut out = QExpansion {
            weight,
            coeffs: BTreeMap::new(),
            ..self.clone()
        };
        for (t, v) in &self.coeffs {
            let w = f(*t, v);
            if w.iter().any(|&x| x != 0) {
                out.coeffs.insert(*t, w);
            }
        }
        out
    }

    /// Multiplies every coefficient by the scalar `alpha`.
    pub fn scale(&self, alpha: FpElem) -> QExpansion {
        let p = self.p.get();
        let a = alpha.value() % p;
        self.map_vectors(self.weight, |_, v| v.iter().map(|x| x * a % p).collect())
    }

    /// Sum of two expansions with equal `(p, N, weight)`.
    pub fn add(&self, other: &QExpansion) -> Result<QExpansion, QExpError> {
        self.check_compatible(other)?;
        if self.weight != other.weight {
            return Err(QExpError::Mismatch("weight"));
        }
        let max_trace = self.max_trace.min(other.max_trace);
        let mut out = self.restrict(max_trace);
        for (t, v) in &other.coeffs {
            if t.trace() <= max_trace {
                out.accumulate(*t, v);
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &QExpansion) -> Result<(), QExpError> {
        if self.p != other.p {
            return Err(QExpError::Mismatch("p"));
        }
        if self.level != other.level {
            return Err(QExpError::Mismatch("level"));
        }
        Ok(())
    }

    /// Cauchy product. At least one factor must be scalar valued (`r = 0`).
    pub fn multiply(&self, other: &QExpansion) -> Result<QExpansion, QExpError> {
        self.check_compatible(other)?;
        let (scalar, vector) = match (self.weight.r(), other.weight.r()) {
            (0, _) => (self, other),
            (_, 0) => (other, self),
            _ => return Err(QExpError::VectorProduct),
        };
        let weight = Weight::new(
            self.weight.k1() + other.weight.k1(),
            self.weight.k2() + other.weight.k2(),
        )?;
        let max_trace = self.max_trace.min(other.max_trace);
        let mut out = QExpansion::zero(self.p, self.level, weight, max_trace)?;
        let p = self.p.get();
        for (t1, s) in &scalar.coeffs {
            if t1.trace() > max_trace {
                continue;
            }
            for (t2, v) in &vector.coeffs {
                let t = *t1 + *t2;
                if t.trace() > max_trace {
                    continue;
                }
                let prod: Vec<u64> = v.iter().map(|x| x * s[0] % p).collect();
                out.accumulate(t, &prod);
            }
        }
        Ok(out)
    }

    /// The unit `(N^2)^{-1}` in F_p.
    fn inv_level_sq(&self) -> FpElem {
        FpElem::new(self.level * self.level, self.p)
            .inv()
            .expect("level is prime to p")
    }

    /// Scalar by which theta multiplies the coefficient at `T`.
    pub fn theta_multiplier(&self, t: TMatrix) -> FpElem {
        FpElem::new(det_t(t), self.p) * self.inv_level_sq()
    }

    /// Applies theta once: scales the coefficient at `T` by `det(T)·N^{-2}`.
    pub fn theta(&self) -> QExpansion {
        let inv = self.inv_level_sq();
        let p = self.p.get();
        self.map_vectors(theta_target_weight(self.p, self.weight), |t, v| {
            let m = (FpElem::new(det_t(t), self.p) * inv).value();
            v.iter().map(|x| x * m % p).collect()
        })
    }

    /// `j`-fold application of [`QExpansion::theta`].
    pub fn theta_iterate(&self, j: u32) -> QExpansion {
        (0..j).fold(self.clone(), |f, _| f.theta())
    }

    /// Whether every stored `T` has `p | det T`. Only meaningful within `max_trace`.
    pub fn is_weakly_p_singular(&self) -> bool {
        let p = self.p.as_i64();
        self.coeffs.keys().all(|t| det_t(*t) % p == 0)
    }

    /// Drops every term with trace above `max_trace`.
    pub fn restrict(&self, max_trace: i64) -> QExpansion {
        let max_trace = max_trace.min(self.max_trace).max(0);
        QExpansion {
            max_trace,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(t, _)| t.trace() <= max_trace)
                .map(|(t, v)| (*t, v.clone()))
                .collect(),
            ..self.clone()
        }
    }

    /// Same coefficients with a different weight label.
    pub fn with_weight(&self, weight: Weight) -> Result<QExpansion, QExpError> {
        if weight.r() != self.weight.r() {
            return Err(QExpError::Mismatch("vector length"));
        }
        Ok(QExpansion {
            weight,
            ..self.clone()
        })
    }

    /// Canonical JSON text: sorted keys, sorted `T`, compact.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("serializable");
        serde_json::to_string(&value).expect("serializable")
    }

    /// Parses a JSON document. Malformed JSON and well-formed but invalid
    /// content are reported separately.
    pub fn from_json(text: &str) -> Result<QExpansion, QExpJsonError> {
        let doc: QExpDoc = serde_json::from_str(text).map_err(QExpJsonError::Syntax)?;
        QExpansion::from_doc(&doc).map_err(QExpJsonError::Invalid)
    }

    fn from_doc(doc: &QExpDoc) -> Result<QExpansion, QExpError> {
        let p = Prime::new(doc.p)?;
        let weight = Weight::try_from(doc.weight)?;
        let mut f = QExpansion::zero(p, doc.level, weight, doc.max_trace)?;
        let len = f.vector_len();
        for term in &doc.coeffs {
            let t = TMatrix::try_from(term.t)?;
            if !t.is_psd() {
                return Err(QExpError::NotPsd(t));
            }
            if t.trace() > doc.max_trace {
                return Err(QExpError::OutsideTruncation {
                    t,
                    max_trace: doc.max_trace,
                });
            }
            if term.v.len() != len {
                return Err(QExpError::VectorLength {
                    t,
                    got: term.v.len(),
                    expected: len,
                });
            }
            if let Some(&bad) = term.v.iter().find(|&&x| x < 0 || x as u64 >= p.get()) {
                return Err(QExpError::CoefficientRange {
                    t,
                    value: bad,
                    p: p.get(),
                });
            }
            if f.coeffs.contains_key(&t) {
                return Err(QExpError::DuplicateT(t));
            }
            let v: Vec<u64> = term.v.iter().map(|&x| x as u64).collect();
            if v.iter().any(|&x| x != 0) {
                f.coeffs.insert(t, v);
            }
        }
        Ok(f)
    }

    fn to_doc(&self) -> QExpDoc {
        QExpDoc {
            p: self.p.as_i64(),
            level: self.level,
            weight: self.weight.into(),
            max_trace: self.max_trace,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, v)| TermDoc {
                    t: (*t).into(),
                    v: v.iter().map(|&x| x as i64).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum QExpJsonError {
    #[error("malformed q-expansion document: {0}")]
    Syntax(serde_json::Error),
    #[error(transparent)]
    Invalid(QExpError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    #[serde(rename = "T")]
    t: [i64; 3],
    v: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QExpDoc {
    p: i64,
    #[serde(rename = "N")]
    level: i64,
    weight: [i64; 2],
    max_trace: i64,
    coeffs: Vec<TermDoc>,
}

impl Serialize for QExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = QExpDoc::deserialize(d)?;
        QExpansion::from_doc(&doc).map_err(D::Error::custom)
    }
}

/// The Hasse invariant, whose q-expansion is the constant `1` in parallel weight `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HasseConstant {
    pub p: Prime,
}

impl HasseConstant {
    pub fn new(p: Prime) -> Self {
        HasseConstant { p }
    }

    pub fn weight(self) -> Weight {
        Weight::parallel(self.p.as_i64() - 1)
    }

    pub fn qexp(self, level: i64, max_trace: i64) -> Result<QExpansion, QExpError> {
        QExpansion::from_terms(
            self.p,
            level,
            self.weight(),
            max_trace,
            [(TMatrix::zero(), vec![1])],
        )
    }
}

/// Weight reached by the small theta operator: `w + (p + 1, p - 1)`.
pub fn theta3_weight(p: Prime, w: Weight) -> Weight {
    let q = p.as_i64();
    Weight::new(w.k1() + q + 1, w.k2() + q - 1).expect("shift keeps k1 >= k2")
}
