//! The local cochain algebra on one simplex: polynomial differential forms
//! in the free barycentric coordinates with values in `Λ g*`.
//!
//! On a simplex with anchor vertex `a` the coordinate `t_a = 1 - Σ t_v` is
//! eliminated, so the coefficient algebra is a free polynomial ring and
//! equality is structural. A form is a sum of terms
//! `p(t) · dt_S ⊗ ε_T` with `|S| + |T| = degree`; containers mixing total
//! degrees are rejected.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::{One, Zero};

use crate::complex::{Simplex, VertexId};
use crate::error::Error;
use crate::lie::LieAlgebra;
use crate::linalg::SparseMatrix;
use crate::poly::{Monomial, Poly};
use crate::Rat;

/// The exterior part of one term: a sorted set of `dt` variables and a
/// sorted set of dual-basis indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermKey {
    pub dt: Vec<VertexId>,
    pub dual: Vec<usize>,
}

impl TermKey {
    pub fn scalar() -> Self {
        TermKey {
            dt: Vec::new(),
            dual: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.dt.len() + self.dual.len()
    }
}

/// A polynomial-coefficient form `Σ p · dt_S ⊗ ε_T` on one simplex,
/// homogeneous of one total degree.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebroidForm {
    simplex: Simplex,
    degree: usize,
    terms: BTreeMap<TermKey, Poly>,
}

/// Merges two disjoint sorted sequences with the shuffle sign; None on
/// overlap.
fn wedge_merge<T: Ord + Clone>(a: &[T], b: &[T]) -> Option<(Vec<T>, i32)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => return None,
            (Some(x), Some(y)) if x < y => {
                merged.push(x.clone());
                i += 1;
            }
            (Some(_), Some(y)) => {
                if (a.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                merged.push(y.clone());
                j += 1;
            }
            (Some(x), None) => {
                merged.push(x.clone());
                i += 1;
            }
            (None, Some(y)) => {
                merged.push(y.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some((merged, sign))
}

impl AlgebroidForm {
    pub fn zero(simplex: Simplex, degree: usize) -> Self {
        AlgebroidForm {
            simplex,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A degree-0 constant form.
    pub fn constant(simplex: Simplex, value: Rat) -> Self {
        let mut f = AlgebroidForm::zero(simplex, 0);
        f.add_term(TermKey::scalar(), Poly::constant(value));
        f
    }

    /// The barycentric coordinate function of a vertex of the simplex,
    /// expressed in the free coordinates.
    pub fn barycentric(simplex: Simplex, v: &VertexId) -> Result<Self, Error> {
        let p = barycentric_poly(&simplex, v)?;
        let mut f = AlgebroidForm::zero(simplex, 0);
        f.add_term(TermKey::scalar(), p);
        Ok(f)
    }

    /// The constant CE form `ε_T`.
    pub fn ce_basis(simplex: Simplex, dual: Vec<usize>) -> Self {
        let degree = dual.len();
        let mut f = AlgebroidForm::zero(simplex, degree);
        f.add_term(
            TermKey {
                dt: Vec::new(),
                dual,
            },
            Poly::one(),
        );
        f
    }

    /// Builds a form from explicit terms; every term must match the stated
    /// total degree and use only free (non-anchor) vertices of the simplex.
    pub fn from_terms(
        simplex: Simplex,
        degree: usize,
        terms: BTreeMap<TermKey, Poly>,
    ) -> Result<Self, Error> {
        for (key, poly) in &terms {
            if key.degree() != degree {
                return Err(Error::MixedDegree);
            }
            let free = simplex.free_vertices();
            let dt_ok = key.dt.windows(2).all(|w| w[0] < w[1])
                && key.dt.iter().all(|v| free.contains(v));
            let dual_ok = key.dual.windows(2).all(|w| w[0] < w[1]);
            let vars_ok = poly
                .terms()
                .flat_map(|(m, _)| m.variables())
                .all(|v| free.contains(v));
            if !dt_ok || !dual_ok || !vars_ok {
                return Err(Error::MalformedSimplex(
                    key.dt.iter().map(|v| v.name().to_owned()).collect(),
                ));
            }
        }
        let mut f = AlgebroidForm::zero(simplex, degree);
        for (k, p) in terms {
            f.add_term(k, p);
        }
        Ok(f)
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: TermKey, poly: Poly) {
        debug_assert_eq!(key.degree(), self.degree);
        if poly.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&poly);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(e) => {
                e.insert(poly);
            }
        }
    }

    pub fn add(&self, other: &AlgebroidForm) -> Result<AlgebroidForm, Error> {
        if self.simplex != other.simplex {
            return Err(Error::SimplexMismatch(
                self.simplex.clone(),
                other.simplex.clone(),
            ));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(k.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgebroidForm) -> Result<AlgebroidForm, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgebroidForm {
        AlgebroidForm {
            simplex: self.simplex.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, p)| (k.clone(), p.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> AlgebroidForm {
        if c.is_zero() {
            return AlgebroidForm::zero(self.simplex.clone(), self.degree);
        }
        AlgebroidForm {
            simplex: self.simplex.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, p)| (k.clone(), p.scale(c)))
                .collect(),
        }
    }

    /// Exterior product. Sign rule:
    /// `(p dt_S ε_T) ∧ (q dt_S' ε_T') = (-1)^{|T||S'|} pq (dt_S ∧ dt_S') ⊗ (ε_T ∧ ε_T')`.
    pub fn wedge(&self, other: &AlgebroidForm) -> Result<AlgebroidForm, Error> {
        if self.simplex != other.simplex {
            return Err(Error::SimplexMismatch(
                self.simplex.clone(),
                other.simplex.clone(),
            ));
        }
        let mut out = AlgebroidForm::zero(self.simplex.clone(), self.degree + other.degree);
        for (k1, p1) in &self.terms {
            for (k2, p2) in &other.terms {
                let Some((dt, sign_dt)) = wedge_merge(&k1.dt, &k2.dt) else {
                    continue;
                };
                let Some((dual, sign_dual)) = wedge_merge(&k1.dual, &k2.dual) else {
                    continue;
                };
                let mut sign = sign_dt * sign_dual;
                if (k1.dual.len() * k2.dt.len()) % 2 == 1 {
                    sign = -sign;
                }
                let poly = p1.mul(p2).scale(&Rat::from_integer(sign.into()));
                out.add_term(TermKey { dt, dual }, poly);
            }
        }
        Ok(out)
    }

    /// Total differential
    /// `D(p dt_S ε_T) = (d_dR p dt_S) ε_T + (-1)^{|S|} p dt_S d_CE(ε_T)`.
    pub fn differential(&self, algebra: &LieAlgebra) -> AlgebroidForm {
        let mut out = AlgebroidForm::zero(self.simplex.clone(), self.degree + 1);
        for (key, poly) in &self.terms {
            // de Rham part
            for v in self.simplex.free_vertices() {
                let dp = poly.derivative(v);
                if dp.is_zero() {
                    continue;
                }
                if let Some((dt, sign)) = wedge_merge(std::slice::from_ref(v), &key.dt) {
                    out.add_term(
                        TermKey {
                            dt,
                            dual: key.dual.clone(),
                        },
                        dp.scale(&Rat::from_integer(sign.into())),
                    );
                }
            }
            // CE part with the Koszul sign
            let koszul = if key.dt.len() % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            for (dual, c) in algebra.ce_differential_basis(&key.dual) {
                out.add_term(
                    TermKey {
                        dt: key.dt.clone(),
                        dual,
                    },
                    poly.scale(&(&koszul * c)),
                );
            }
        }
        out
    }

    /// Restriction to a face: dropped coordinates are set to zero and, when
    /// the anchor is dropped, the face's own anchor coordinate is
    /// re-eliminated.
    pub fn restrict_to_face(&self, face: &Simplex) -> Result<AlgebroidForm, Error> {
        if !face.is_face_of(&self.simplex) {
            return Err(Error::NotAFace {
                face: face.clone(),
                of: self.simplex.clone(),
            });
        }
        if face == &self.simplex {
            return Ok(self.clone());
        }
        let anchor_kept = face.contains_vertex(self.simplex.anchor());
        let new_anchor = face.anchor().clone();
        // substitution images of the free coordinates of the source
        let mut var_sub: BTreeMap<VertexId, Poly> = BTreeMap::new();
        let mut dt_sub: BTreeMap<VertexId, Vec<(VertexId, Rat)>> = BTreeMap::new();
        for v in self.simplex.free_vertices() {
            if !face.contains_vertex(v) {
                var_sub.insert(v.clone(), Poly::zero());
                dt_sub.insert(v.clone(), Vec::new());
            } else if !anchor_kept && *v == new_anchor {
                let mut p = Poly::one();
                let mut dts = Vec::new();
                for u in face.free_vertices() {
                    p = p.sub(&Poly::var(u.clone()));
                    dts.push((u.clone(), -Rat::one()));
                }
                var_sub.insert(v.clone(), p);
                dt_sub.insert(v.clone(), dts);
            }
            // otherwise the coordinate survives unchanged
        }
        let mut out = AlgebroidForm::zero(face.clone(), self.degree);
        for (key, poly) in &self.terms {
            let substituted = poly.substitute(&var_sub);
            if substituted.is_zero() {
                continue;
            }
            // expand the product of substituted dt factors
            let mut acc: Vec<(Vec<VertexId>, Rat)> = vec![(Vec::new(), Rat::one())];
            for v in &key.dt {
                let image: Vec<(VertexId, Rat)> = match dt_sub.get(v) {
                    Some(img) => img.clone(),
                    None => vec![(v.clone(), Rat::one())],
                };
                let mut next = Vec::new();
                for (s, c) in &acc {
                    for (u, cu) in &image {
                        if let Some((merged, sign)) = wedge_merge(s, std::slice::from_ref(u)) {
                            next.push((merged, c * cu * Rat::from_integer(sign.into())));
                        }
                    }
                }
                acc = next;
            }
            for (dt, c) in acc {
                out.add_term(
                    TermKey {
                        dt,
                        dual: key.dual.clone(),
                    },
                    substituted.scale(&c),
                );
            }
        }
        Ok(out)
    }

    /// Weight decomposition: the weight of a term is its polynomial degree
    /// plus its `dt` count. Parts are returned in increasing weight and sum
    /// back to the form.
    pub fn weight_components(&self) -> Vec<(u32, AlgebroidForm)> {
        let mut parts: BTreeMap<u32, AlgebroidForm> = BTreeMap::new();
        for (key, poly) in &self.terms {
            for (m, c) in poly.terms() {
                let w = m.degree() + key.dt.len() as u32;
                parts
                    .entry(w)
                    .or_insert_with(|| AlgebroidForm::zero(self.simplex.clone(), self.degree))
                    .add_term(key.clone(), Poly::monomial(m.clone(), c.clone()));
            }
        }
        parts.into_iter().collect()
    }

    /// Largest term weight; zero for the zero form.
    pub fn max_weight(&self) -> u32 {
        self.terms
            .iter()
            .map(|(k, p)| p.degree() + k.dt.len() as u32)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for AlgebroidForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, poly)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{poly}]")?;
            for v in &key.dt {
                write!(f, " dt_{v}")?;
            }
            if !key.dual.is_empty() {
                write!(f, " eps{:?}", key.dual)?;
            }
        }
        Ok(())
    }
}

/// Barycentric coordinate of any vertex of the simplex as a polynomial in
/// the free coordinates.
pub fn barycentric_poly(simplex: &Simplex, v: &VertexId) -> Result<Poly, Error> {
    if !simplex.contains_vertex(v) {
        return Err(Error::NotAFace {
            face: Simplex::new(vec![v.clone()])?,
            of: simplex.clone(),
        });
    }
    if v == simplex.anchor() {
        let mut p = Poly::one();
        for u in simplex.free_vertices() {
            p = p.sub(&Poly::var(u.clone()));
        }
        Ok(p)
    } else {
        Ok(Poly::var(v.clone()))
    }
}

/// `d t_v` on the simplex, as a 1-form.
pub fn barycentric_differential(simplex: &Simplex, v: &VertexId) -> Result<AlgebroidForm, Error> {
    if !simplex.contains_vertex(v) {
        return Err(Error::NotAFace {
            face: Simplex::new(vec![v.clone()])?,
            of: simplex.clone(),
        });
    }
    let mut out = AlgebroidForm::zero(simplex.clone(), 1);
    if v == simplex.anchor() {
        for u in simplex.free_vertices() {
            out.add_term(
                TermKey {
                    dt: vec![u.clone()],
                    dual: Vec::new(),
                },
                Poly::constant(-Rat::one()),
            );
        }
    } else {
        out.add_term(
            TermKey {
                dt: vec![v.clone()],
                dual: Vec::new(),
            },
            Poly::one(),
        );
    }
    Ok(out)
}

/// Enumerates the term basis (monomial, dt set, dual set) of forms of the
/// given degree and weight at most `max_weight` on a simplex.
pub(crate) fn term_basis(
    simplex: &Simplex,
    fiber_dim: usize,
    degree: usize,
    max_weight: u32,
) -> Vec<(Monomial, Vec<VertexId>, Vec<usize>)> {
    let free: Vec<VertexId> = simplex.free_vertices().to_vec();
    let mut out = Vec::new();
    for s_count in 0..=degree.min(free.len()) {
        let t_count = degree - s_count;
        if t_count > fiber_dim {
            continue;
        }
        if (s_count as u32) > max_weight {
            continue;
        }
        let poly_bound = max_weight - s_count as u32;
        for dt in free.iter().cloned().combinations(s_count) {
            for dual in crate::lie::sorted_subsets(fiber_dim, t_count) {
                for mono in monomials_up_to(&free, poly_bound) {
                    out.push((mono, dt.clone(), dual.clone()));
                }
            }
        }
    }
    out
}

/// All monomials in the given variables with total degree at most `bound`.
fn monomials_up_to(vars: &[VertexId], bound: u32) -> Vec<Monomial> {
    fn rec(
        vars: &[VertexId],
        bound: u32,
        idx: usize,
        current: &mut BTreeMap<VertexId, u32>,
        out: &mut Vec<Monomial>,
    ) {
        if idx == vars.len() {
            out.push(Monomial::from_exponents(current.clone()));
            return;
        }
        for e in 0..=bound {
            if e > 0 {
                current.insert(vars[idx].clone(), e);
            }
            rec(vars, bound - e, idx + 1, current, out);
            current.remove(&vars[idx]);
        }
    }
    let mut out = Vec::new();
    rec(vars, bound, 0, &mut BTreeMap::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Constructive surjectivity witness: finds a form on the simplex whose
/// restriction to every facet equals the given (pairwise compatible)
/// family. The solution is found by exact linear solving on the trial
/// space of weight at most `w`, with `w` escalated until the system is
/// feasible; the particular solution with free coefficients zero makes the
/// output deterministic.
pub fn extend_from_boundary(
    algebra: &LieAlgebra,
    simplex: &Simplex,
    degree: usize,
    boundary: &BTreeMap<Simplex, AlgebroidForm>,
) -> Result<AlgebroidForm, Error> {
    let facets = simplex.facets();
    if facets.is_empty() {
        return Ok(AlgebroidForm::zero(simplex.clone(), degree));
    }
    for f in &facets {
        match boundary.get(f) {
            Some(form) if form.simplex() == f && form.degree() == degree => {}
            _ => {
                return Err(Error::IncompatibleBoundary {
                    face: f.clone(),
                    difference: "missing or mismatched facet form".into(),
                })
            }
        }
    }
    // pairwise compatibility on shared ridges
    for (a, b) in facets.iter().tuple_combinations() {
        let shared: Vec<VertexId> = a
            .vertices()
            .iter()
            .filter(|v| b.contains_vertex(v))
            .cloned()
            .collect();
        if shared.is_empty() {
            continue;
        }
        let ridge = Simplex::new(shared)?;
        let ra = boundary[a].restrict_to_face(&ridge)?;
        let rb = boundary[b].restrict_to_face(&ridge)?;
        let diff = ra.sub(&rb)?;
        if !diff.is_zero() {
            return Err(Error::IncompatibleBoundary {
                face: ridge,
                difference: diff.to_string(),
            });
        }
    }

    let data_weight = boundary.values().map(|f| f.max_weight()).max().unwrap_or(0);
    let weight_cap = data_weight + simplex.dim() as u32 + 16;
    for w in data_weight..=weight_cap {
        if let Some(found) = try_extend_at_weight(algebra, simplex, degree, boundary, &facets, w) {
            return Ok(found);
        }
    }
    unreachable!("polynomial boundary extension must exist at bounded weight")
}

fn try_extend_at_weight(
    algebra: &LieAlgebra,
    simplex: &Simplex,
    degree: usize,
    boundary: &BTreeMap<Simplex, AlgebroidForm>,
    facets: &[Simplex],
    max_weight: u32,
) -> Option<AlgebroidForm> {
    let trial = term_basis(simplex, algebra.dim(), degree, max_weight);
    type RowKey = (Simplex, TermKey, Monomial);
    let mut row_index: BTreeMap<RowKey, usize> = BTreeMap::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let mut rows: Vec<Vec<(usize, Rat)>> = Vec::new();
    let mut row_of = |key: RowKey, rows: &mut Vec<Vec<(usize, Rat)>>, rhs: &mut Vec<Rat>| -> usize {
        *row_index.entry(key).or_insert_with(|| {
            rows.push(Vec::new());
            rhs.push(Rat::zero());
            rows.len() - 1
        })
    };
    // seed rows from the boundary data
    for facet in facets {
        for (key, poly) in boundary[facet].terms() {
            for (m, c) in poly.terms() {
                let r = row_of(
                    (facet.clone(), key.clone(), m.clone()),
                    &mut rows,
                    &mut rhs,
                );
                rhs[r] = c.clone();
            }
        }
    }
    // restriction of each trial term to each facet
    for (col, (mono, dt, dual)) in trial.iter().enumerate() {
        let mut unit = AlgebroidForm::zero(simplex.clone(), degree);
        unit.add_term(
            TermKey {
                dt: dt.clone(),
                dual: dual.clone(),
            },
            Poly::monomial(mono.clone(), Rat::one()),
        );
        for facet in facets {
            let restricted = unit
                .restrict_to_face(facet)
                .expect("facet restriction is defined");
            for (key, poly) in restricted.terms() {
                for (m, c) in poly.terms() {
                    let r = row_of(
                        (facet.clone(), key.clone(), m.clone()),
                        &mut rows,
                        &mut rhs,
                    );
                    rows[r].push((col, c.clone()));
                }
            }
        }
    }
    let mut mat = SparseMatrix::new(trial.len());
    for row in rows {
        mat.push_row(row);
    }
    let x = mat.solve(&rhs)?;
    let mut out = AlgebroidForm::zero(simplex.clone(), degree);
    for ((mono, dt, dual), c) in trial.into_iter().zip(x.into_iter()) {
        out.add_term(TermKey { dt, dual }, Poly::monomial(mono, c));
    }
    Some(out)
}
