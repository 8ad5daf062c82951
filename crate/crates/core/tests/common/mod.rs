//! Shared fixtures and generators for the integration suites.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::Rng;

use pwforms::complex::{Simplex, SimplicialComplex, VertexId};
use pwforms::forms::{AlgebroidForm, TermKey};
use pwforms::lie::LieAlgebra;
use pwforms::poly::{Monomial, Poly};
use pwforms::{rat, Rat};

pub fn sx(names: &[&str]) -> Simplex {
    Simplex::from_names(names).unwrap()
}

pub fn s1() -> SimplicialComplex {
    SimplicialComplex::closure(&[sx(&["v0", "v1"]), sx(&["v1", "v2"]), sx(&["v0", "v2"])])
}

pub fn t2() -> SimplicialComplex {
    SimplicialComplex::closure(&[sx(&["v0", "v1", "v2"])])
}

pub fn boundary_tetra() -> SimplicialComplex {
    SimplicialComplex::closure(&[
        sx(&["v0", "v1", "v2"]),
        sx(&["v0", "v1", "v3"]),
        sx(&["v0", "v2", "v3"]),
        sx(&["v1", "v2", "v3"]),
    ])
}

pub fn point() -> SimplicialComplex {
    SimplicialComplex::closure(&[sx(&["v0"])])
}

pub fn aff1() -> LieAlgebra {
    LieAlgebra::new(2, [((0, 1), vec![rat(0), rat(1)])].into()).unwrap()
}

/// A compact 3-dimensional simple algebra (so(3)-type): H_CE = (1,0,0,1),
/// the same answer the sl(2) family gives over the rationals.
pub fn sl2_type() -> LieAlgebra {
    LieAlgebra::new(
        3,
        [
            ((0, 1), vec![rat(0), rat(0), rat(1)]),
            ((0, 2), vec![rat(0), rat(-1), rat(0)]),
            ((1, 2), vec![rat(1), rat(0), rat(0)]),
        ]
        .into(),
    )
    .unwrap()
}

/// A random face-closed complex on at most `max_vertices` vertices; always
/// nonempty.
pub fn random_complex(rng: &mut StdRng, max_vertices: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut generators = vec![Simplex::from_names(&[vertices[0].as_str()]).unwrap()];
    let count = rng.gen_range(1..=4);
    for _ in 0..count {
        let size = rng.gen_range(1..=3.min(n));
        let mut picked: Vec<&str> = Vec::new();
        while picked.len() < size {
            let v = vertices[rng.gen_range(0..n)].as_str();
            if !picked.contains(&v) {
                picked.push(v);
            }
        }
        generators.push(Simplex::from_names(&picked).unwrap());
    }
    SimplicialComplex::closure(&generators)
}

/// A random Lie algebra of dimension at most 3, drawn from validated
/// samples (abelian, aff(1)-type, so(3)-type).
pub fn random_algebra(rng: &mut StdRng) -> LieAlgebra {
    match rng.gen_range(0..4) {
        0 => LieAlgebra::trivial(),
        1 => LieAlgebra::abelian(rng.gen_range(1..=3)),
        2 => aff1(),
        _ => sl2_type(),
    }
}

/// A random homogeneous local form of the given degree on one simplex.
pub fn random_local_form(
    rng: &mut StdRng,
    simplex: &Simplex,
    fiber_dim: usize,
    degree: usize,
    max_weight: u32,
) -> AlgebroidForm {
    let free: Vec<VertexId> = simplex.free_vertices().to_vec();
    let mut out = AlgebroidForm::zero(simplex.clone(), degree);
    let terms = rng.gen_range(1..=4);
    'outer: for _ in 0..terms {
        let s_count = rng.gen_range(0..=degree.min(free.len()));
        let t_count = degree - s_count;
        if t_count > fiber_dim {
            continue;
        }
        let mut dt: Vec<VertexId> = Vec::new();
        while dt.len() < s_count {
            let v = free[rng.gen_range(0..free.len())].clone();
            if !dt.contains(&v) {
                dt.push(v);
            }
        }
        dt.sort();
        let mut dual: Vec<usize> = Vec::new();
        while dual.len() < t_count {
            let i = rng.gen_range(0..fiber_dim);
            if !dual.contains(&i) {
                dual.push(i);
            }
        }
        dual.sort_unstable();
        let mut exps: BTreeMap<VertexId, u32> = BTreeMap::new();
        let budget = max_weight.saturating_sub(s_count as u32);
        let poly_degree = if budget == 0 || free.is_empty() {
            0
        } else {
            rng.gen_range(0..=budget)
        };
        for _ in 0..poly_degree {
            let v = free[rng.gen_range(0..free.len())].clone();
            *exps.entry(v).or_insert(0) += 1;
        }
        let coeff: Rat = rat(rng.gen_range(-3..=3i64));
        if num::Zero::is_zero(&coeff) {
            continue 'outer;
        }
        out.add_term(
            TermKey { dt, dual },
            Poly::monomial(Monomial::from_exponents(exps), coeff),
        );
    }
    out
}

/// A random simplex of the complex.
pub fn random_simplex(rng: &mut StdRng, k: &SimplicialComplex) -> Simplex {
    let all: Vec<&Simplex> = k.simplices().collect();
    all[rng.gen_range(0..all.len())].clone()
}

/// A random subcomplex: closure of a random subset of simplices.
pub fn random_subcomplex(rng: &mut StdRng, k: &SimplicialComplex) -> SimplicialComplex {
    let all: Vec<&Simplex> = k.simplices().collect();
    let picked: Vec<Simplex> = all
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|s| (*s).clone())
        .collect();
    if picked.is_empty() {
        let i = rng.gen_range(0..all.len());
        return SimplicialComplex::closure(&[all[i].clone()]);
    }
    SimplicialComplex::closure(&picked)
}
