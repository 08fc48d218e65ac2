use super::{
    residue, validate_cycle_input, CycleError, CycleResult, LowPoint, LowPointType, Provenance,
};
use crate::arith::Prime;

use LowPointType::{First, Second};

const P3_AMBIGUOUS: &str =
    "for p = 3 both trigger congruences coincide; the low point is reported as type 1";

/// Closed-form cycle.
///
/// * `p = 2`: `(k + 2)`.
/// * `r > 1`: `(k + 2p, k + 4p, ...)`.
/// * odd `p`, `r = 1`: the non-semi-ordinary table, or the semi-ordinary
///   table obtained from it at `k + (p+1)`.
/// * `r = 0`: unsupported.
pub fn cycle_closed_form(
    p: Prime,
    r: i64,
    k: i64,
    semi_ordinary: bool,
) -> Result<CycleResult, CycleError> {
    validate_cycle_input(p, r, k, semi_ordinary)?;
    let q = p.as_i64();
    let result = |values, low_points, provenance, caveats| CycleResult {
        p,
        r,
        k,
        semi_ordinary,
        values,
        low_points,
        provenance,
        caveats,
    };
    if !p.is_odd() {
        return Ok(result(vec![k + 2], vec![], Provenance::Degenerate, vec![]));
    }
    if r > 1 {
        let values = (1..=(q - 1) / 2).map(|j| k + 2 * q * j).collect();
        return Ok(result(values, vec![], Provenance::Degenerate, vec![]));
    }
    if r == 0 {
        return Err(CycleError::UnsupportedClosedForm { r });
    }
    let (values, low_points, caveats) = if semi_ordinary {
        semi(q, k)?
    } else {
        non_semi(q, k)?
    };
    Ok(result(values, low_points, Provenance::ClosedForm, caveats))
}

type Table = (Vec<i64>, Vec<LowPoint>, Vec<String>);

/// `start + j(p+1)` for `j` in `from..=to`.
fn block(q: i64, start: i64, from: i64, to: i64) -> impl Iterator<Item = i64> {
    (from..=to).map(move |j| start + j * (q + 1))
}

fn non_semi(q: i64, k: i64) -> Result<Table, CycleError> {
    let k0 = residue(Prime::new(q).expect("prime"), k);
    let mut caveats = Vec::new();
    if k0 == (q + 1) / 2 || k0 == 2 {
        let kind = if k0 == (q + 1) / 2 { First } else { Second };
        if q == 3 {
            caveats.push(P3_AMBIGUOUS.to_string());
        }
        let values = block(q, k, 1, (q - 3) / 2).chain([k]).collect();
        let lp = LowPoint::new(kind, (q - 1) / 2, (q + 1) / 2, k);
        return Ok((values, vec![lp], caveats));
    }
    if q >= 7 && ((q + 5) / 2..=q - 1).contains(&k0) {
        let k1 = k + 2 - 2 * k0;
        let values = block(q, k, 1, q - 1 - k0)
            .chain(block(q, k1, 0, k0 - (q + 3) / 2))
            .chain([k])
            .collect();
        let lps = vec![
            LowPoint::new(First, q - k0, q + 2 - k0, k1),
            LowPoint::new(Second, k0 - (q + 1) / 2, k0 - (q + 3) / 2, k),
        ];
        return Ok((values, lps, caveats));
    }
    if q >= 7 && (3..=(q - 1) / 2).contains(&k0) {
        let k2 = k + 2 + 2 * q - 2 * k0;
        let values = block(q, k, 1, (q + 1) / 2 - k0)
            .chain(block(q, k2, 0, k0 - 3))
            .chain([k])
            .collect();
        let lps = vec![
            LowPoint::new(Second, (q + 3) / 2 - k0, (q + 1) / 2 - k0, k2),
            LowPoint::new(First, k0 - 2, k0, k),
        ];
        return Ok((values, lps, caveats));
    }
    Err(CycleError::InvalidInput(format!(
        "residue k0 = {k0} is not covered by any row"
    )))
}

/// Semi-ordinary table. The first entry is `k + (p+1)` and the rest is the
/// non-semi-ordinary cycle of `Θ(f)` with its last entry removed; low points
/// are those of that cycle.
fn semi(q: i64, k: i64) -> Result<Table, CycleError> {
    let k0 = residue(Prime::new(q).expect("prime"), k);
    if ((k0 + 1) * (2 * k0 - 1)) % q == 0 {
        return Err(CycleError::IndeterminateStep { k0 });
    }
    let kg = k + q + 1;
    let mut caveats = vec![format!(
        "low points are those of the cycle of Θ(f), anchored at {kg}"
    )];
    if k0 == 1 || k0 == (q - 1) / 2 {
        let kind = if k0 == (q - 1) / 2 { First } else { Second };
        if q == 3 {
            caveats.push(P3_AMBIGUOUS.to_string());
        }
        let values = block(q, k, 1, (q - 1) / 2).collect();
        let lp = LowPoint::new(kind, (q - 1) / 2, (q + 1) / 2, kg);
        return Ok((values, vec![lp], caveats));
    }
    if q >= 7 && ((q + 3) / 2..=q - 2).contains(&k0) {
        let k1 = k + (q + 1) - 2 * k0;
        let values = block(q, k, 1, q - 1 - k0)
            .chain(block(q, k1, 0, k0 - (q + 1) / 2))
            .collect();
        let lps = vec![
            LowPoint::new(First, q - 1 - k0, q + 1 - k0, k1),
            LowPoint::new(Second, k0 - (q - 1) / 2, k0 - (q + 1) / 2, kg),
        ];
        return Ok((values, lps, caveats));
    }
    if q >= 7 && (2..=(q - 3) / 2).contains(&k0) {
        let k2 = k + (q + 1) + 2 * q - 2 * k0;
        let values = block(q, k, 1, (q + 1) / 2 - k0)
            .chain(block(q, k2, 0, k0 - 2))
            .collect();
        let lps = vec![
            LowPoint::new(Second, (q + 1) / 2 - k0, (q - 1) / 2 - k0, k2),
            LowPoint::new(First, k0 - 1, k0 + 1, kg),
        ];
        return Ok((values, lps, caveats));
    }
    // Remaining residue k0 = p: Θ(f) has residue 1 and no congruence is met
    // inside the window.
    caveats.push("no low point occurs inside the cycle window".to_string());
    let values = block(q, k, 1, (q - 1) / 2).collect();
    Ok((values, vec![], caveats))
}
