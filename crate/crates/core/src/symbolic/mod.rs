//! Exact symbolic engine for the local coefficient formulas of the theta operator.

mod derive;
mod intpoly;
mod sympoly;
mod transcribe;

use serde::Serialize;
use thiserror::Error;

pub use derive::{derive_theta_local, derive_theta_local_formal};
pub use intpoly::{IntPoly, Param};
pub use sympoly::{block_of, pole_order, sympoly_diff, Block, Monomial, Nabla, PoleOrder, SymPoly, Symbol};
pub use transcribe::{
    psi1_coefficients, theta_local_general, theta_local_general_formal, theta_local_r0,
    theta_local_r1,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("index n={n} out of range for r={r}")]
    IndexOutOfRange { r: i64, n: i64 },
    #[error("derivatives of order three are not supported")]
    DerivativeOrder,
}

/// Blocks on which the general and corollary forms are required to agree.
pub const ASSERTED_BLOCKS: [Block; 3] = [Block::SecondOrder, Block::DetC, Block::Quadratic];

/// The corollary form of `A_n` for `r` in `{0, 1}`.
pub fn theta_local_corollary(r: i64, n: i64) -> Option<SymPoly> {
    match (r, n) {
        (0, 0) => Some(theta_local_r0()),
        (1, _) => theta_local_r1(n).ok(),
        _ => None,
    }
}

/// Comparison of two forms of the same polynomial, split by block.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BlockComparison {
    pub second_order: String,
    pub det_c: String,
    pub quadratic: String,
    pub cross: String,
    pub other: String,
    pub asserted_blocks_match: bool,
}

pub fn compare(a: &SymPoly, b: &SymPoly) -> BlockComparison {
    let diff = sympoly_diff(a, b);
    let text = |blk| diff.block(blk).to_string();
    BlockComparison {
        second_order: text(Block::SecondOrder),
        det_c: text(Block::DetC),
        quadratic: text(Block::Quadratic),
        cross: text(Block::Cross),
        other: text(Block::Other),
        asserted_blocks_match: ASSERTED_BLOCKS.iter().all(|&b| diff.block(b).is_zero()),
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LocalEntry {
    pub r: i64,
    pub n: i64,
    pub general: String,
    pub pole_order_general: u32,
    pub pole_order_corollary: Option<u32>,
    pub general_vs_corollary: Option<BlockComparison>,
    pub derived_vs_general: BlockComparison,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LocalReport {
    pub r_max: i64,
    pub entries: Vec<LocalEntry>,
    /// Pole orders within bounds and corollary comparisons agree on the asserted blocks.
    pub ok: bool,
}

/// Compares all transcriptions and the re-derivation for `0 <= n <= r <= r_max`.
pub fn verify_local(r_max: i64) -> Result<LocalReport, SymbolicError> {
    let mut entries = Vec::new();
    let mut ok = true;
    for r in 0..=r_max {
        for n in 0..=r {
            let general = theta_local_general(r, n)?;
            let derived = derive_theta_local(r, n)?;
            let po = pole_order(&general).0;
            ok &= po <= 2;
            let cor = theta_local_corollary(r, n);
            let po_cor = cor.as_ref().map(|c| pole_order(c).0);
            let cmp = cor.as_ref().map(|c| compare(&general, c));
            if let Some(c) = &cmp {
                ok &= c.asserted_blocks_match;
                ok &= po_cor == Some(1);
            }
            entries.push(LocalEntry {
                r,
                n,
                general: general.to_string(),
                pole_order_general: po,
                pole_order_corollary: po_cor,
                general_vs_corollary: cmp,
                derived_vs_general: compare(&derived, &general),
            });
        }
    }
    Ok(LocalReport { r_max, entries, ok })
}
