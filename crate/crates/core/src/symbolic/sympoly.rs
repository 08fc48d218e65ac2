use std::collections::BTreeMap;
use std::fmt;

use super::intpoly::{IntPoly, Param};
use super::SymbolicError;

/// One of the three commuting derivations `∇11`, `∇12`, `∇22`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nabla {
    D11,
    D12,
    D22,
}

impl Nabla {
    pub const ALL: [Nabla; 3] = [Nabla::D11, Nabla::D12, Nabla::D22];

    fn label(self) -> &'static str {
        match self {
            Nabla::D11 => "11",
            Nabla::D12 => "12",
            Nabla::D22 => "22",
        }
    }
}

/// Atomic factor of a monomial.
///
/// `C21` only appears in intermediate results; every public output has it
/// identified with `C12`. Second-order derivatives keep their two operators
/// sorted since the derivations commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    C11,
    C12,
    C21,
    C22,
    DetC,
    F(u32),
    D(Nabla, u32),
    DD(Nabla, Nabla, u32),
}

impl Symbol {
    pub fn dd(a: Nabla, b: Nabla, n: u32) -> Symbol {
        if a <= b {
            Symbol::DD(a, b, n)
        } else {
            Symbol::DD(b, a, n)
        }
    }

    /// Contribution of this factor to the pole order along the Hasse locus.
    pub fn pole_weight(self) -> u32 {
        match self {
            Symbol::C11 | Symbol::C12 | Symbol::C21 | Symbol::C22 | Symbol::DetC => 1,
            _ => 0,
        }
    }

    pub fn is_c(self) -> bool {
        matches!(self, Symbol::C11 | Symbol::C12 | Symbol::C21 | Symbol::C22)
    }

    /// Index `m` of the coefficient function `F_m` this symbol refers to.
    pub fn f_index(self) -> Option<u32> {
        match self {
            Symbol::F(n) | Symbol::D(_, n) | Symbol::DD(_, _, n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::C11 => write!(f, "c11"),
            Symbol::C12 => write!(f, "c12"),
            Symbol::C21 => write!(f, "c21"),
            Symbol::C22 => write!(f, "c22"),
            Symbol::DetC => write!(f, "detC"),
            Symbol::F(n) => write!(f, "F{n}"),
            Symbol::D(a, n) => write!(f, "D{}(F{n})", a.label()),
            Symbol::DD(a, b, n) => write!(f, "D{}D{}(F{n})", a.label(), b.label()),
        }
    }
}

/// A monomial: sorted multiset of symbols.
pub type Monomial = Vec<Symbol>;

fn normalized(mut m: Monomial) -> Monomial {
    m.sort_unstable();
    m
}

/// Coarse classification of monomials used when comparing transcriptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    /// A single second-order derivative `∇∇F`.
    SecondOrder,
    /// Anything containing `det(C)`.
    DetC,
    /// `c·c·F`.
    Quadratic,
    /// `c·∇F`.
    Cross,
    Other,
}

pub fn block_of(m: &[Symbol]) -> Block {
    let cs = m.iter().filter(|s| s.is_c()).count();
    let has_det = m.contains(&Symbol::DetC);
    let first = m.iter().any(|s| matches!(s, Symbol::D(..)));
    let second = m.iter().any(|s| matches!(s, Symbol::DD(..)));
    let plain = m.iter().any(|s| matches!(s, Symbol::F(_)));
    if has_det {
        Block::DetC
    } else if second && cs == 0 && m.len() == 1 {
        Block::SecondOrder
    } else if cs == 2 && plain && m.len() == 3 {
        Block::Quadratic
    } else if cs == 1 && first && m.len() == 2 {
        Block::Cross
    } else {
        Block::Other
    }
}

/// Maximal pole order of a polynomial along the zero locus of the Hasse invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PoleOrder(pub u32);

/// Sparse polynomial: monomial in [`Symbol`]s times an [`IntPoly`] coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymPoly {
    terms: BTreeMap<Monomial, IntPoly>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    pub fn term(coeff: impl Into<IntPoly>, symbols: &[Symbol]) -> Self {
        let mut p = SymPoly::zero();
        p.add_term(normalized(symbols.to_vec()), coeff.into());
        p
    }

    pub fn symbol(s: Symbol) -> Self {
        SymPoly::term(1, &[s])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &IntPoly)> {
        self.terms.iter()
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coeff(&self, symbols: &[Symbol]) -> IntPoly {
        self.terms
            .get(&normalized(symbols.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: IntPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &SymPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &SymPoly) -> SymPoly {
        self.add(&other.scale(&IntPoly::constant(-1)))
    }

    pub fn scale(&self, c: &IntPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = normalized(ma.iter().chain(mb).copied().collect());
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&IntPoly) -> IntPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Substitutes `k1 = k2 + r` and `n = n_value` in every coefficient.
    pub fn specialize(&self, r: i64, n_value: i64) -> SymPoly {
        let k1 = IntPoly::k2() + r;
        let n = IntPoly::constant(n_value);
        self.map_coeffs(|c| c.subst(Param::K1, &k1).subst(Param::N, &n))
    }

    /// Replaces each occurrence of `from` by the polynomial `to`.
    pub fn substitute(&self, from: Symbol, to: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = SymPoly::term(c.clone(), &[]);
            for s in m {
                let factor = if *s == from {
                    to.clone()
                } else {
                    SymPoly::symbol(*s)
                };
                acc = acc.mul(&factor);
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Identifies `c21` with `c12`.
    pub fn identify_c21(&self) -> SymPoly {
        self.substitute(Symbol::C21, &SymPoly::symbol(Symbol::C12))
    }

    /// Rewrites every `c11·c22` pair as `det(C) + c12²` (valid once `c21 = c12`).
    pub fn contract_det(&self) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let mut acc = SymPoly::term(1, &[]);
            while let (Some(i), Some(j)) = (
                m.iter().position(|s| *s == Symbol::C11),
                m.iter().position(|s| *s == Symbol::C22),
            ) {
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                m.remove(hi);
                m.remove(lo);
                let det = SymPoly::symbol(Symbol::DetC)
                    .add(&SymPoly::term(1, &[Symbol::C12, Symbol::C12]));
                acc = acc.mul(&det);
            }
            out.add_assign(&acc.mul(&SymPoly::term(c.clone(), &m)));
        }
        out
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&[Symbol]) -> bool) -> SymPoly {
        SymPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn block(&self, b: Block) -> SymPoly {
        self.filter(|m| block_of(m) == b)
    }

    pub fn contains_symbol(&self, pred: impl Fn(Symbol) -> bool) -> bool {
        self.terms.keys().flatten().any(|s| pred(*s))
    }

    /// All `F` indices referenced by the polynomial.
    pub fn f_indices(&self) -> Vec<u32> {
        let mut idx: Vec<u32> = self
            .terms
            .keys()
            .flatten()
            .filter_map(|s| s.f_index())
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }

    /// Applies the derivation `d` by the Leibniz rule.
    pub fn nabla(&self, d: Nabla) -> Result<SymPoly, SymbolicError> {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            for i in 0..m.len() {
                let ds = nabla_symbol(d, m[i])?;
                if ds.is_zero() {
                    continue;
                }
                let rest: Monomial = m
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, s)| *s)
                    .collect();
                out.add_assign(&ds.mul(&SymPoly::term(c.clone(), &rest)));
            }
        }
        Ok(out)
    }
}

fn cc(a: Symbol, b: Symbol) -> SymPoly {
    SymPoly::term(1, &[a, b])
}

/// Derivative of a single factor.
///
/// The `c_ij` rules are the fixed input table for commuting derivations; the
/// `det(C)` rule follows from that table by expanding `c11·c22 - c12·c21`.
fn nabla_symbol(d: Nabla, s: Symbol) -> Result<SymPoly, SymbolicError> {
    use Nabla::*;
    use Symbol::*;
    Ok(match (d, s) {
        (D11, C11) => cc(C11, C11),
        (D11, C12) => cc(C11, C12),
        (D11, C21) => cc(C11, C21),
        (D11, C22) => cc(C12, C21),
        (D12, C11) => cc(C12, C11).add(&cc(C21, C11)),
        (D12, C12) => cc(C11, C22).add(&cc(C12, C12)),
        (D12, C21) => cc(C11, C22).add(&cc(C21, C21)),
        (D12, C22) => cc(C12, C22).add(&cc(C21, C22)),
        (D22, C11) => cc(C12, C21),
        (D22, C12) => cc(C22, C12),
        (D22, C21) => cc(C22, C21),
        (D22, C22) => cc(C22, C22),
        (D11, DetC) => cc(C11, DetC),
        (D12, DetC) => cc(C12, DetC).add(&cc(C21, DetC)),
        (D22, DetC) => cc(C22, DetC),
        (_, F(n)) => SymPoly::symbol(D(d, n)),
        (_, D(a, n)) => SymPoly::symbol(Symbol::dd(a, d, n)),
        (_, DD(..)) => return Err(SymbolicError::DerivativeOrder),
    })
}

/// `max` over monomials of the number of `c_ij` and `det(C)` factors.
pub fn pole_order(poly: &SymPoly) -> PoleOrder {
    PoleOrder(
        poly.terms
            .keys()
            .map(|m| m.iter().map(|s| s.pole_weight()).sum())
            .max()
            .unwrap_or(0),
    )
}

/// Exact difference `a - b`.
pub fn sympoly_diff(a: &SymPoly, b: &SymPoly) -> SymPoly {
    a.sub(b)
}

/// Canonical text: sorted monomials joined by ` + `, each as `(coeff)*sym*...`.
impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for s in m {
                write!(f, "*{s}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol::*;

    #[test]
    fn diff_of_equal_is_empty() {
        let x = SymPoly::term(IntPoly::k1(), &[C11, F(0)]);
        assert!(sympoly_diff(&x, &x).is_empty());
    }

    #[test]
    fn leibniz() {
        // ∇11(c11 F0) = c11² F0 + c11 ∇11F0
        let x = SymPoly::term(1, &[C11, F(0)]);
        let dx = x.nabla(Nabla::D11).unwrap();
        assert_eq!(dx.coeff(&[C11, C11, F(0)]), IntPoly::constant(1));
        assert_eq!(dx.coeff(&[C11, D(Nabla::D11, 0)]), IntPoly::constant(1));
        assert_eq!(dx.len(), 2);
        let second = SymPoly::symbol(D(Nabla::D22, 0)).nabla(Nabla::D11).unwrap();
        assert_eq!(second, SymPoly::symbol(DD(Nabla::D11, Nabla::D22, 0)));
        assert!(second.nabla(Nabla::D12).is_err());
    }

    #[test]
    fn det_rule_matches_expansion() {
        // With det(C) expanded as c11 c22 - c12 c21, the Leibniz rule gives the atomic rule.
        let expanded = cc(C11, C22).sub(&cc(C12, C21));
        for d in Nabla::ALL {
            let lhs = expanded.nabla(d).unwrap();
            let rhs = nabla_symbol(d, DetC)
                .unwrap()
                .substitute(DetC, &expanded);
            assert!(lhs.sub(&rhs).is_zero(), "{d:?}");
        }
    }

    #[test]
    fn pole_orders() {
        assert_eq!(pole_order(&SymPoly::symbol(F(0))), PoleOrder(0));
        assert_eq!(pole_order(&SymPoly::term(3, &[DetC, F(0)])), PoleOrder(1));
        assert_eq!(pole_order(&SymPoly::term(3, &[C12, C12, F(1)])), PoleOrder(2));
        assert_eq!(pole_order(&SymPoly::zero()), PoleOrder(0));
    }

    #[test]
    fn contraction_and_identification() {
        let x = SymPoly::term(2, &[C11, C22, F(0)]).add(&SymPoly::term(1, &[C21, F(0)]));
        let y = x.identify_c21().contract_det();
        assert_eq!(y.coeff(&[DetC, F(0)]), IntPoly::constant(2));
        assert_eq!(y.coeff(&[C12, C12, F(0)]), IntPoly::constant(2));
        assert_eq!(y.coeff(&[C12, F(0)]), IntPoly::constant(1));
        assert!(!y.contains_symbol(|s| s == C21));
    }

    #[test]
    fn blocks() {
        assert_eq!(block_of(&[DD(Nabla::D11, Nabla::D22, 0)]), Block::SecondOrder);
        assert_eq!(block_of(&[DetC, F(0)]), Block::DetC);
        assert_eq!(block_of(&[C12, C12, F(0)]), Block::Quadratic);
        assert_eq!(block_of(&[C12, D(Nabla::D12, 0)]), Block::Cross);
    }

    #[test]
    fn text_form() {
        let x = SymPoly::term(IntPoly::k2() * 4 - 1, &[C12, D(Nabla::D12, 0)])
            .add(&SymPoly::term(-1, &[DD(Nabla::D12, Nabla::D12, 0)]));
        assert_eq!(x.to_string(), "(4*k2 - 1)*c12*D12(F0) + (-1)*D12D12(F0)");
        assert_eq!(SymPoly::zero().to_string(), "0");
    }
}
