//! Hand transcriptions of the local coefficient formulas.
//!
//! The `*_formal` builders keep `k1`, `k2` and `n` as formal parameters (with
//! `r = k1 - k2`). The public entry points then fix `n` and eliminate `k1` via
//! `k1 = k2 + r`, so their coefficients are polynomials in `k2` alone. For the
//! corollary forms `k2` is the weight parameter usually written `k`.

use super::intpoly::IntPoly;
use super::sympoly::{Nabla, SymPoly, Symbol};
use super::SymbolicError;

use Nabla::{D11, D12, D22};
use Symbol::{C11, C12, C21, C22, DetC};

fn check_range(r: i64, n: i64) -> Result<(), SymbolicError> {
    if r < 0 || n < 0 || n > r {
        return Err(SymbolicError::IndexOutOfRange { r, n });
    }
    Ok(())
}

/// Helper that drops any term whose `F` index falls outside `[0, r]`.
struct Builder {
    r: i64,
    acc: SymPoly,
}

impl Builder {
    fn new(r: i64) -> Self {
        Builder {
            r,
            acc: SymPoly::zero(),
        }
    }

    fn push(&mut self, coeff: IntPoly, c_factors: &[Symbol], f: impl Fn(u32) -> Symbol, m: i64) {
        if m < 0 || m > self.r {
            return;
        }
        let mut syms = c_factors.to_vec();
        syms.push(f(m as u32));
        self.acc.add_assign(&SymPoly::term(coeff, &syms));
    }

    fn f(&mut self, coeff: IntPoly, c_factors: &[Symbol], m: i64) {
        self.push(coeff, c_factors, Symbol::F, m);
    }

    fn d(&mut self, coeff: IntPoly, c_factors: &[Symbol], d: Nabla, m: i64) {
        self.push(coeff, c_factors, |i| Symbol::D(d, i), m);
    }

    fn dd(&mut self, coeff: IntPoly, a: Nabla, b: Nabla, m: i64) {
        self.push(coeff, &[], |i| Symbol::dd(a, b, i), m);
    }
}

fn k1() -> IntPoly {
    IntPoly::k1()
}

fn k2() -> IntPoly {
    IntPoly::k2()
}

fn nn() -> IntPoly {
    IntPoly::n()
}

fn rr() -> IntPoly {
    k1() - k2()
}

fn c(v: i64) -> IntPoly {
    IntPoly::constant(v)
}

/// First-order coefficients `(b2, b1, b0)` of the index-`n` component, with
/// `c21` kept distinct from `c12`.
pub(crate) fn psi1_formal(r: i64, n: i64) -> Result<[SymPoly; 3], SymbolicError> {
    check_range(r, n)?;
    let mut b2 = Builder::new(r);
    b2.d(c(1), &[], D11, n);
    b2.f(-(k1() - nn()), &[C11], n);
    b2.f(-(rr() + 1 - nn()), &[C12], n - 1);

    let mut b1 = Builder::new(r);
    b1.d(c(1), &[], D12, n);
    b1.f(-(nn() + 1), &[C11], n + 1);
    b1.f(-(k1() - nn()), &[C21], n);
    b1.f(-(k2() + nn()), &[C12], n);
    b1.f(-(rr() + 1 - nn()), &[C22], n - 1);

    let mut b0 = Builder::new(r);
    b0.d(c(1), &[], D22, n);
    b0.f(-(k2() + nn()), &[C22], n);
    b0.f(-(nn() + 1), &[C21], n + 1);

    Ok([b2.acc, b1.acc, b0.acc])
}

/// The coefficients `(b2, b1, b0)` of `u_2, u_1, u_0` in the index-`n`
/// component of the first derivative, with `c21` identified with `c12`.
pub fn psi1_coefficients(r: i64, n: i64) -> Result<[SymPoly; 3], SymbolicError> {
    Ok(psi1_formal(r, n)?.map(|b| b.identify_c21().specialize(r, n)))
}

/// General `A_n` with formal `k1`, `k2`, `n`. Only the index range of the
/// `F_m` symbols depends on the concrete `r` and `n`.
pub fn theta_local_general_formal(r: i64, n: i64) -> Result<SymPoly, SymbolicError> {
    check_range(r, n)?;
    let rn = rr() - nn();
    let mut a = Builder::new(r);
    a.dd(c(4), D11, D22, n);
    a.dd(c(-1), D12, D12, n);
    a.f(
        (k1() * (k2() * 2 - 1) + rn.clone() * nn()) * 2,
        &[DetC],
        n,
    );
    a.d((k2() * 2 + nn() * 2 - 1) * -2, &[C22], D11, n);
    a.d((k1() * 2 + k2() * 2 - 1) * 2, &[C12], D12, n);
    a.d((nn() * 2 - k1() * 2 + 1) * 2, &[C11], D22, n);
    a.f(
        -((rr() - 1) * rr() - rn.clone() * nn() * 6),
        &[C12, C12],
        n,
    );
    a.d((rn.clone() + 1) * 2, &[C22], D12, n - 1);
    a.d((rn.clone() + 1) * -4, &[C12], D22, n - 1);
    a.d((nn() + 1) * -4, &[C12], D11, n + 1);
    a.d((nn() + 1) * 2, &[C11], D12, n + 1);
    a.f(
        (rn.clone() + 1) * (-rr() + nn() * 2 - 1) * 2,
        &[C12, C22],
        n - 1,
    );
    a.f(
        (nn() + 1) * (-rr() + nn() * 2 + 1) * -2,
        &[C11, C12],
        n + 1,
    );
    a.f(-((rn.clone() + 1) * (rn + 2)), &[C22, C22], n - 2);
    a.f(-((nn() + 1) * (nn() + 2)), &[C11, C11], n + 2);
    Ok(a.acc)
}

/// General `A_n` specialized to the concrete `r` and `n`.
pub fn theta_local_general(r: i64, n: i64) -> Result<SymPoly, SymbolicError> {
    Ok(theta_local_general_formal(r, n)?.specialize(r, n))
}

/// `4∇11∇22(F_m) - ∇12∇12(F_m)`, the determinant block shared by all forms.
fn det_block(b: &mut Builder, m: i64) {
    b.dd(c(4), D11, D22, m);
    b.dd(c(-1), D12, D12, m);
}

/// Parallel weight `(k, k)` form of `A_0`; `k` is written `k2`.
pub fn theta_local_r0() -> SymPoly {
    let k = k2();
    let t = k.clone() * 2 - 1;
    let mut a = Builder::new(0);
    det_block(&mut a, 0);
    a.f(k * 2 * t.clone(), &[DetC], 0);
    a.d(t.clone() * -2, &[C22], D11, 0);
    a.d(t.clone() * 2, &[C12], D12, 0);
    a.d(t * -2, &[C11], D22, 0);
    a.acc
}

/// Weight `(k + 1, k)` form of `A_n` for `n` in `{0, 1}`; `k` is written `k2`.
pub fn theta_local_r1(n: i64) -> Result<SymPoly, SymbolicError> {
    check_range(1, n)?;
    let k = k2();
    let det = (k.clone() + 1) * 2 * (k.clone() * 2 - 1);
    let mut a = Builder::new(1);
    det_block(&mut a, n);
    a.f(det, &[DetC], n);
    if n == 0 {
        a.d((k.clone() * 2 - 1) * -2, &[C22], D11, 0);
        a.d(k.clone() * 4, &[C12], D12, 0);
        a.d((k * 2 + 1) * -2, &[C11], D22, 0);
        a.d(c(-4), &[C12], D11, 1);
        a.d(c(2), &[C11], D12, 1);
    } else {
        a.d((k.clone() * 2 + 1) * -2, &[C22], D11, 1);
        a.d((k.clone() * 4 + 1) * 2, &[C12], D12, 1);
        a.d((-k * 2 + 1) * 2, &[C11], D22, 1);
        a.d(c(2), &[C22], D12, 0);
        a.d(c(-4), &[C12], D22, 0);
    }
    Ok(a.acc)
}
