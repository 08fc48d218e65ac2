//! Integer polynomials in the formal weight parameters `k1`, `k2` and `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Formal parameter of a monomial coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    K1,
    K2,
    N,
}

impl Param {
    const ALL: [Param; 3] = [Param::K1, Param::K2, Param::N];

    fn index(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        match self {
            Param::K1 => "k1",
            Param::K2 => "k2",
            Param::N => "n",
        }
    }
}

type Exponents = [u32; 3];

/// Sparse polynomial in `Z[k1, k2, n]`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    terms: BTreeMap<Exponents, i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = IntPoly::zero();
        p.add_term([0, 0, 0], c);
        p
    }

    pub fn var(v: Param) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        let mut p = IntPoly::zero();
        p.add_term(e, 1);
        p
    }

    pub fn k1() -> Self {
        IntPoly::var(Param::K1)
    }

    pub fn k2() -> Self {
        IntPoly::var(Param::K2)
    }

    pub fn n() -> Self {
        IntPoly::var(Param::N)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this polynomial is constant.
    pub fn as_constant(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&[0, 0, 0]).copied(),
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Param) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exponents, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        (0..k).fold(IntPoly::constant(1), |acc, _| &acc * self)
    }

    /// Replaces every occurrence of `v` by `value`.
    pub fn subst(&self, v: Param, value: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (e, &c) in &self.terms {
            let mut rest = *e;
            let k = rest[v.index()];
            rest[v.index()] = 0;
            let mut mono = IntPoly::zero();
            mono.add_term(rest, c);
            out = &out + &(&mono * &value.pow(k));
        }
        out
    }

    /// Evaluates at concrete parameter values.
    pub fn eval(&self, k1: i64, k2: i64, n: i64) -> i64 {
        let vals = [k1, k2, n];
        self.terms
            .iter()
            .map(|(e, &c)| {
                c * e
                    .iter()
                    .zip(vals)
                    .map(|(&k, x)| x.pow(k))
                    .product::<i64>()
            })
            .sum()
    }
}

impl From<i64> for IntPoly {
    fn from(c: i64) -> Self {
        IntPoly::constant(c)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            terms: self.terms.iter().map(|(e, &c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<i64> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: i64) -> IntPoly {
                (&self).$m(&IntPoly::constant(rhs))
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

/// Canonical text: terms by descending exponent vector, e.g. `4*k2^2 - 2*k2 + 1`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = Param::ALL
                .iter()
                .filter(|v| e[v.index()] > 0)
                .map(|v| match e[v.index()] {
                    1 => v.name().to_string(),
                    k => format!("{}^{}", v.name(), k),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let k = IntPoly::k2();
        // 2k(2k-1)
        let p = (k.clone() * 2) * (k.clone() * 2 - 1);
        assert_eq!(p.to_string(), "4*k2^2 - 2*k2");
        assert_eq!((p.clone() - p).to_string(), "0");
        assert_eq!((-IntPoly::k1() + 3).to_string(), "-k1 + 3");
    }

    #[test]
    fn substitution() {
        // k1(2k2 - 1) at k1 = k2 + 1
        let p = IntPoly::k1() * (IntPoly::k2() * 2 - 1);
        let q = p.subst(Param::K1, &(IntPoly::k2() + 1));
        assert_eq!(q, (IntPoly::k2() + 1) * (IntPoly::k2() * 2 - 1));
        assert_eq!(q.eval(0, 3, 0), 20);
        assert_eq!(q.degree_in(Param::K1), 0);
        assert_eq!(IntPoly::n().subst(Param::N, &IntPoly::constant(0)), IntPoly::zero());
    }

    #[test]
    fn constants() {
        assert_eq!(IntPoly::constant(7).as_constant(), Some(7));
        assert_eq!(IntPoly::zero().as_constant(), Some(0));
        assert_eq!(IntPoly::k1().as_constant(), None);
    }
}
