//! Multivariate polynomials over exact rationals in the free barycentric
//! coordinates of one simplex.
//!
//! A monomial maps variables to positive exponents; a polynomial maps
//! monomials to nonzero coefficients. Zero coefficients and zero exponents
//! are never stored, so structural equality is semantic equality.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::complex::VertexId;
use crate::Rat;

/// A power product of barycentric coordinate variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<VertexId, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: VertexId) -> Self {
        Monomial([(v, 1)].into())
    }

    pub fn from_exponents(exps: BTreeMap<VertexId, u32>) -> Self {
        Monomial(exps.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn exponents(&self) -> &BTreeMap<VertexId, u32> {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, v: &VertexId) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.0.clone();
        for (v, e) in &other.0 {
            *exps.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(exps)
    }

    pub fn variables(&self) -> impl Iterator<Item = &VertexId> {
        self.0.keys()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "t_{v}")?;
            } else {
                write!(f, "t_{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(BTreeMap<Monomial, Rat>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly([(Monomial::one(), c)].into())
        }
    }

    pub fn var(v: VertexId) -> Self {
        Poly([(Monomial::var(v), Rat::one())].into())
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly([(m, c)].into())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.0.iter()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.0.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, k)| (m.clone(), k * c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Formal partial derivative with respect to `t_v`.
    pub fn derivative(&self, v: &VertexId) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().clone();
            if e == 1 {
                exps.remove(v);
            } else {
                exps.insert(v.clone(), e - 1);
            }
            out.add_term(Monomial(exps), c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Substitutes polynomials for variables. Variables absent from the map
    /// are left untouched.
    pub fn substitute(&self, map: &BTreeMap<VertexId, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let mut term = Poly::constant(c.clone());
            for (v, e) in m.exponents() {
                let factor = match map.get(v) {
                    Some(p) => p.clone(),
                    None => Poly::var(v.clone()),
                };
                for _ in 0..*e {
                    term = term.mul(&factor);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluates at a rational point. Variables absent from the assignment
    /// evaluate to zero.
    pub fn evaluate(&self, point: &BTreeMap<VertexId, Rat>) -> Rat {
        let mut out = Rat::zero();
        for (m, c) in &self.0 {
            let mut term = c.clone();
            for (v, e) in m.exponents() {
                let val = point.get(v).cloned().unwrap_or_else(Rat::zero);
                for _ in 0..*e {
                    term *= val.clone();
                }
            }
            out += term;
        }
        out
    }

    /// The part of the polynomial of exact total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly(
            self.0
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}
