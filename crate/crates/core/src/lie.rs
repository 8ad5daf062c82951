//! Finite-dimensional Lie algebras over exact rationals and their
//! Chevalley-Eilenberg complex.
//!
//! Structure constants are stored for index pairs i < j only, so
//! antisymmetry is built in; the Jacobi identity is checked explicitly.
//! The CE differential on `Λ g*` is the derivation extension of
//! `d ε^k = -Σ_{i<j} c_ij^k ε^i ∧ ε^j`, which is the convention under
//! which the total differential of the form algebra squares to zero.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::Error;
use crate::linalg::{PivotStrategy, SparseMatrix};
use crate::Rat;

/// A Lie algebra given by structure constants `[e_i, e_j] = Σ_k c_ij^k e_k`
/// for i < j.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl LieAlgebra {
    /// Builds an algebra from its nonzero brackets; omitted pairs are zero.
    /// The Jacobi identity is not checked here, see [`LieAlgebra::validate`].
    pub fn new(dim: usize, brackets: BTreeMap<(usize, usize), Vec<Rat>>) -> Result<Self, Error> {
        for (&(i, j), coeffs) in &brackets {
            if i >= j || j >= dim {
                return Err(Error::MalformedLieAlgebra(format!(
                    "bracket indices ({i},{j}) must satisfy i < j < dim = {dim}"
                )));
            }
            if coeffs.len() != dim {
                return Err(Error::MalformedLieAlgebra(format!(
                    "bracket ({i},{j}) has {} coefficients, expected {dim}",
                    coeffs.len()
                )));
            }
        }
        Ok(LieAlgebra { dim, brackets })
    }

    /// The abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    /// The zero-dimensional (trivial) fiber.
    pub fn trivial() -> Self {
        LieAlgebra::abelian(0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn brackets(&self) -> &BTreeMap<(usize, usize), Vec<Rat>> {
        &self.brackets
    }

    /// `[e_i, e_j]` as a dense coefficient vector, for any index pair.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        assert!(i < self.dim && j < self.dim);
        if i == j {
            return vec![Rat::zero(); self.dim];
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        match self.brackets.get(&(a, b)) {
            Some(c) if sign > 0 => c.clone(),
            Some(c) => c.iter().map(|x| -x.clone()).collect(),
            None => vec![Rat::zero(); self.dim],
        }
    }

    /// Checks the Jacobi identity on every basis triple.
    pub fn validate(&self) -> Result<(), Error> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let mut defect = vec![Rat::zero(); self.dim];
                    // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
                    for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(x, y);
                        for (m, c) in inner.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let outer = self.bracket_basis(m, z);
                            for (n, d) in outer.iter().enumerate() {
                                defect[n] += c * d;
                            }
                        }
                    }
                    if defect.iter().any(|c| !c.is_zero()) {
                        return Err(Error::JacobiViolation {
                            i,
                            j,
                            k,
                            defect: format_vector(&defect),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `d ε^k` as a list of ((i,j), coefficient) with i < j:
    /// `d ε^k = -Σ_{i<j} c_ij^k ε^i ∧ ε^j`.
    fn d_eps(&self, k: usize) -> Vec<((usize, usize), Rat)> {
        let mut out = Vec::new();
        for (&(i, j), coeffs) in &self.brackets {
            if !coeffs[k].is_zero() {
                out.push(((i, j), -coeffs[k].clone()));
            }
        }
        out
    }

    /// CE differential of a basis element `ε_T`, as (sorted subset, coeff)
    /// pairs of degree |T| + 1.
    pub fn ce_differential_basis(&self, subset: &[usize]) -> Vec<(Vec<usize>, Rat)> {
        let mut acc: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
        for (m, &tm) in subset.iter().enumerate() {
            let sign_m = if m % 2 == 0 { Rat::one() } else { -Rat::one() };
            let rest: Vec<usize> = subset
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != m)
                .map(|(_, &t)| t)
                .collect();
            for ((i, j), c) in self.d_eps(tm) {
                if let Some((merged, sign)) = wedge_subsets(&[i, j], &rest) {
                    let coeff = &sign_m * c * Rat::from_integer(sign.into());
                    let entry = acc.entry(merged).or_insert_with(Rat::zero);
                    *entry += coeff;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc.into_iter().collect()
    }

    /// Dimensions of the Lie algebra cohomology `H^0 .. H^n` over the
    /// rationals, via exact ranks of the CE matrices.
    pub fn ce_cohomology(&self) -> Vec<usize> {
        let n = self.dim;
        let mut ranks = vec![0usize; n + 1]; // rank of d: Λ^s -> Λ^{s+1}
        for s in 0..n {
            let domain = sorted_subsets(n, s);
            let codomain = sorted_subsets(n, s + 1);
            let index: BTreeMap<Vec<usize>, usize> = codomain
                .iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i))
                .collect();
            let mut mat = SparseMatrix::new(domain.len());
            let mut rows: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); codomain.len()];
            for (col, t) in domain.iter().enumerate() {
                for (target, coeff) in self.ce_differential_basis(t) {
                    rows[index[&target]].push((col, coeff));
                }
            }
            for row in rows {
                mat.push_row(row);
            }
            ranks[s] = mat.rank(PivotStrategy::Markowitz);
        }
        (0..=n)
            .map(|s| {
                let dim_s = binomial(n, s);
                let rank_out = if s < n { ranks[s] } else { 0 };
                let rank_in = if s > 0 { ranks[s - 1] } else { 0 };
                dim_s - rank_out - rank_in
            })
            .collect()
    }
}

/// A cochain in `Λ^s g*`, indexed by sorted s-element subsets of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CECochain {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Rat>,
}

impl CECochain {
    pub fn zero(dim: usize, degree: usize) -> Self {
        CECochain {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn new(dim: usize, degree: usize, coeffs: BTreeMap<Vec<usize>, Rat>) -> Result<Self, Error> {
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        for subset in coeffs.keys() {
            let sorted_ok =
                subset.len() == degree && subset.windows(2).all(|w| w[0] < w[1]);
            if !sorted_ok || subset.iter().any(|&i| i >= dim) {
                return Err(Error::MalformedLieAlgebra(format!(
                    "cochain index {subset:?} is not a sorted {degree}-subset of 0..{dim}"
                )));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(CECochain {
            dim,
            degree,
            coeffs,
        })
    }

    /// The dual basis element `ε_T`.
    pub fn basis(dim: usize, subset: Vec<usize>) -> Result<Self, Error> {
        let degree = subset.len();
        CECochain::new(dim, degree, [(subset, Rat::one())].into())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, Rat> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for CECochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*eps{t:?}")?;
        }
        Ok(())
    }
}

/// CE differential of a cochain; degree rises by one.
pub fn ce_differential(algebra: &LieAlgebra, cochain: &CECochain) -> Result<CECochain, Error> {
    if cochain.degree >= algebra.dim {
        return Err(Error::DegreeOverflow {
            degree: cochain.degree,
            dim: algebra.dim,
        });
    }
    let mut out: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
    for (subset, c) in &cochain.coeffs {
        for (target, d) in algebra.ce_differential_basis(subset) {
            let entry = out.entry(target).or_insert_with(Rat::zero);
            *entry += c * &d;
        }
    }
    out.retain(|_, v| !v.is_zero());
    CECochain::new(algebra.dim, cochain.degree + 1, out)
}

/// Merges two disjoint sorted index sets with the shuffle sign; None on
/// overlap.
pub fn wedge_subsets(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => return None,
            (Some(x), Some(y)) if x < y => {
                merged.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                // y jumps over the remaining elements of a
                if (a.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                merged.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                merged.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                merged.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some((merged, sign))
}

/// All sorted k-subsets of 0..n, in lexicographic order.
pub fn sorted_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(n, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(n, k, 0, &mut current, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn format_vector(v: &[Rat]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("({c})*e{i}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
