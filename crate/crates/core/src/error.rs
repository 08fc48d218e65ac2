use std::path::PathBuf;

use thiserror::Error;

use crate::arith::ArithError;
use crate::cycle::CycleError;
use crate::qexp::QExpError;
use crate::serre::SerreError;
use crate::symbolic::SymbolicError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    QExp(#[from] QExpError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Serre(#[from] SerreError),
    #[error("invalid document {path}: {message}")]
    InvalidDocument { path: PathBuf, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Arith(e) => arith_code(e),
            Error::Symbolic(SymbolicError::IndexOutOfRange { .. }) => "index_out_of_range",
            Error::Symbolic(SymbolicError::DerivativeOrder) => "derivative_order",
            Error::QExp(e) => match e {
                QExpError::Arith(a) => arith_code(a),
                QExpError::InvalidLevel { .. } => "invalid_level",
                QExpError::NegativeTruncation(_) => "negative_truncation",
                QExpError::NotPsd(_) => "not_psd",
                QExpError::OutsideTruncation { .. } => "outside_truncation",
                QExpError::DuplicateT(_) => "duplicate_t",
                QExpError::VectorLength { .. } => "vector_length",
                QExpError::CoefficientRange { .. } => "coefficient_range",
                QExpError::Mismatch(_) => "mismatch",
                QExpError::VectorProduct => "vector_product",
            },
            Error::Cycle(e) => match e {
                CycleError::CongruenceExcluded { .. } => "congruence_excluded",
                CycleError::IndeterminateStep { .. } => "indeterminate_step",
                CycleError::UnsupportedClosedForm { .. } => "unsupported_closed_form",
                CycleError::InvalidInput(_) => "invalid_cycle_input",
            },
            Error::Serre(e) => match e {
                SerreError::Range(_) => "range",
                SerreError::Ramification(_) => "ramification",
                SerreError::KlingenCase(_) => "klingen_case",
                SerreError::EmptyCandidates => "empty_candidates",
                SerreError::NoValidRepresentative { .. } => "no_valid_representative",
            },
            Error::InvalidDocument { .. } => "invalid_document",
            Error::Verification(_) => "verification_failed",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
        }
    }

    /// Process exit code: 1 for I/O and parse failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse { .. } => 1,
            _ => 2,
        }
    }
}

fn arith_code(e: &ArithError) -> &'static str {
    match e {
        ArithError::NotPrime(_) => "not_prime",
        ArithError::PrimeTooLarge(_) => "prime_too_large",
        ArithError::WeightOrder { .. } => "weight_order",
        ArithError::NegativeDiagonal { .. } => "negative_diagonal",
    }
}
