//! Re-derivation of `A_n` from the first-order data.
//!
//! A section is `Σ F_m δ_m` and the derivative of a section is written in the
//! basis `u_i = e1^i e2^(2-i)` of the weight `(2,0)` piece, with `∇11`, `∇12`,
//! `∇22` producing the `u_2`, `u_1`, `u_0` components. The action on `δ_m`
//! is the one whose Leibniz expansion reproduces the first-order coefficients;
//! on `u_i` it is the same rule at weight `(2,0)`, where `u_i = δ_(2-i)`.

use super::intpoly::IntPoly;
use super::sympoly::{Nabla, SymPoly, Symbol};
use super::SymbolicError;

use Symbol::{C11, C12, C21, C22};

/// Weight parameters entering the basis rules.
#[derive(Clone)]
struct BasisWeight {
    k1: IntPoly,
    k2: IntPoly,
    r: i64,
}

impl BasisWeight {
    fn formal(r: i64) -> Self {
        BasisWeight {
            k1: IntPoly::k1(),
            k2: IntPoly::k2(),
            r,
        }
    }

    fn hodge() -> Self {
        BasisWeight {
            k1: IntPoly::constant(2),
            k2: IntPoly::constant(0),
            r: 2,
        }
    }

    fn r_poly(&self) -> IntPoly {
        &self.k1 - &self.k2
    }
}

/// `∇_d δ_m` as a list of `(index, coefficient)` pairs.
fn basis_rule(w: &BasisWeight, d: Nabla, m: i64) -> Vec<(i64, SymPoly)> {
    let mi = IntPoly::constant(m);
    let k1m = &w.k1 - &mi;
    let k2m = &w.k2 + &mi;
    let rm = &w.r_poly() - &mi;
    let t = |coeff: IntPoly, s: Symbol| SymPoly::term(-coeff, &[s]);
    let out = match d {
        Nabla::D11 => vec![(m, t(k1m, C11)), (m + 1, t(rm, C12))],
        Nabla::D12 => vec![
            (m - 1, t(mi, C11)),
            (m, t(k1m, C21).add(&t(k2m, C12))),
            (m + 1, t(rm, C22)),
        ],
        Nabla::D22 => vec![(m, t(k2m, C22)), (m - 1, t(mi, C21))],
    };
    out.into_iter()
        .filter(|(i, c)| (0..=w.r).contains(i) && !c.is_zero())
        .collect()
}

/// Operator attached to the `u_i` (or `v_i`) slot.
fn slot_nabla(i: usize) -> Nabla {
    match i {
        2 => Nabla::D11,
        1 => Nabla::D12,
        _ => Nabla::D22,
    }
}

/// A section of the form `Σ_{m} g_m δ_m`.
type Section = Vec<SymPoly>;

/// First derivative of `Σ F_m δ_m`: entry `[i][n]` is the coefficient of `u_i ⊗ δ_n`.
fn first_derivative(r: i64) -> Result<[Section; 3], SymbolicError> {
    let w = BasisWeight::formal(r);
    let f: Section = (0..=r).map(|m| SymPoly::symbol(Symbol::F(m as u32))).collect();
    let mut out: [Section; 3] = Default::default();
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = derive_section(&w, slot_nabla(i), &f)?;
    }
    Ok(out)
}

/// `∇_d` applied to `Σ g_m δ_m`, returned in the same basis.
fn derive_section(w: &BasisWeight, d: Nabla, g: &Section) -> Result<Section, SymbolicError> {
    let mut out: Section = vec![SymPoly::zero(); g.len()];
    for (m, gm) in g.iter().enumerate() {
        out[m].add_assign(&gm.nabla(d)?);
        for (idx, coeff) in basis_rule(w, d, m as i64) {
            out[idx as usize].add_assign(&coeff.mul(gm));
        }
    }
    Ok(out)
}

/// First-order coefficients computed from the basis rules (formal, `c21` kept).
#[cfg(test)]
pub(crate) fn psi1_from_rules(r: i64, n: i64) -> Result<[SymPoly; 3], SymbolicError> {
    if r < 0 || n < 0 || n > r {
        return Err(SymbolicError::IndexOutOfRange { r, n });
    }
    let b = first_derivative(r)?;
    Ok([
        b[2][n as usize].clone(),
        b[1][n as usize].clone(),
        b[0][n as usize].clone(),
    ])
}

/// Derives `A_n` from first principles and normalizes it the same way as the
/// transcriptions (`c21 = c12`, `c11·c22` contracted into `det(C)`, `n` fixed
/// and `k1 = k2 + r`).
pub fn derive_theta_local(r: i64, n: i64) -> Result<SymPoly, SymbolicError> {
    derive_theta_local_formal(r, n).map(|a| a.specialize(r, n))
}

/// As [`derive_theta_local`] but with `k1`, `k2` left formal.
pub fn derive_theta_local_formal(r: i64, n: i64) -> Result<SymPoly, SymbolicError> {
    if r < 0 || n < 0 || n > r {
        return Err(SymbolicError::IndexOutOfRange { r, n });
    }
    let w = BasisWeight::formal(r);
    let hodge = BasisWeight::hodge();
    let b = first_derivative(r)?;

    // y[i][j]: coefficient of u_i ⊗ v_j ⊗ δ_n in the second derivative.
    let y = |i: usize, j: usize| -> Result<SymPoly, SymbolicError> {
        let d = slot_nabla(j);
        let mut acc = derive_section(&w, d, &b[i])?[n as usize].clone();
        for (i2, slot) in b.iter().enumerate() {
            // u_{i2} = δ_{2 - i2} at weight (2,0)
            for (idx, coeff) in basis_rule(&hodge, d, 2 - i2 as i64) {
                if 2 - idx == i as i64 {
                    acc.add_assign(&coeff.mul(&slot[n as usize]));
                }
            }
        }
        Ok(acc)
    };

    let two = IntPoly::constant(2);
    let a = y(2, 0)?
        .scale(&two)
        .sub(&y(1, 1)?)
        .add(&y(0, 2)?.scale(&two));
    Ok(a.identify_c21().contract_det())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::transcribe::psi1_formal;
    use Symbol::{DD, F};

    #[test]
    fn rules_reproduce_first_order() {
        for r in 0..=4 {
            for n in 0..=r {
                let derived = psi1_from_rules(r, n).unwrap();
                let table = psi1_formal(r, n).unwrap();
                for i in 0..3 {
                    let diff = derived[i].sub(&table[i]).specialize(r, n);
                    assert!(diff.is_zero(), "r={r} n={n} slot {i}: {diff}");
                }
            }
        }
    }

    #[test]
    fn hodge_rules_match_e_basis() {
        // ∇11 e1² = -2 c11 e1² - 2 c12 e1 e2 and ∇11 e2² = 0.
        let h = BasisWeight::hodge();
        let rule = basis_rule(&h, Nabla::D11, 0);
        assert_eq!(rule.len(), 2);
        assert_eq!(rule[0].1, SymPoly::term(-2, &[C11]));
        assert_eq!(rule[1].1, SymPoly::term(-2, &[C12]));
        assert!(basis_rule(&h, Nabla::D11, 2).is_empty());
        assert!(basis_rule(&h, Nabla::D22, 0).is_empty());
    }

    #[test]
    fn second_order_block_r0() {
        let a = derive_theta_local(0, 0).unwrap();
        assert_eq!(a.coeff(&[DD(Nabla::D11, Nabla::D22, 0)]), IntPoly::constant(4));
        assert_eq!(a.coeff(&[DD(Nabla::D12, Nabla::D12, 0)]), IntPoly::constant(-1));
        assert!(!a.contains_symbol(|s| s == C21));
        assert_eq!(a.f_indices(), vec![0]);
    }

    #[test]
    fn r1_has_no_f2() {
        let a = derive_theta_local(1, 0).unwrap();
        assert!(!a.contains_symbol(|s| s == F(2)));
    }
}
