//! Compatible families of local forms over a whole complex.
//!
//! A piecewise form assigns to every simplex of its domain a local form,
//! and the assignment must commute with restriction to faces. Components
//! that are zero are simply not stored, so structural equality of the
//! component maps is equality of forms.

use std::collections::BTreeMap;

use crate::complex::{
    closed_star_subcomplex, open_star_members, Simplex, SimplicialComplex, StarOpen, VertexId,
};
use crate::error::Error;
use crate::forms::{self, AlgebroidForm, TermKey};
use crate::lie::LieAlgebra;
use crate::poly::Poly;
use crate::Rat;

/// The trivialized algebroid datum: a base complex and the fiber Lie
/// algebra. Construction validates the Jacobi identity.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebroidComplex {
    base: SimplicialComplex,
    fiber: LieAlgebra,
}

impl AlgebroidComplex {
    pub fn new(base: SimplicialComplex, fiber: LieAlgebra) -> Result<Self, Error> {
        fiber.validate()?;
        Ok(AlgebroidComplex { base, fiber })
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn fiber(&self) -> &LieAlgebra {
        &self.fiber
    }
}

/// A family `{ω_σ}` of local forms indexed by the simplices of a domain
/// complex. Compatibility is not enforced by construction; call
/// [`PiecewiseForm::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseForm {
    domain: SimplicialComplex,
    degree: usize,
    components: BTreeMap<Simplex, AlgebroidForm>,
}

impl PiecewiseForm {
    pub fn zero(domain: SimplicialComplex, degree: usize) -> Self {
        PiecewiseForm {
            domain,
            degree,
            components: BTreeMap::new(),
        }
    }

    /// Builds a family from explicit components; zero components may be
    /// omitted. Every keyed simplex must belong to the domain and every
    /// component must live on its key with the stated degree.
    pub fn from_components(
        domain: SimplicialComplex,
        degree: usize,
        components: BTreeMap<Simplex, AlgebroidForm>,
    ) -> Result<Self, Error> {
        let mut out = PiecewiseForm::zero(domain, degree);
        for (s, f) in components {
            out.set_component(s, f)?;
        }
        Ok(out)
    }

    pub fn domain(&self) -> &SimplicialComplex {
        &self.domain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The component on one simplex (zero when not stored).
    pub fn component(&self, simplex: &Simplex) -> AlgebroidForm {
        self.components
            .get(simplex)
            .cloned()
            .unwrap_or_else(|| AlgebroidForm::zero(simplex.clone(), self.degree))
    }

    /// Iterates the stored (nonzero) components.
    pub fn components(&self) -> impl Iterator<Item = (&Simplex, &AlgebroidForm)> {
        self.components.iter()
    }

    pub fn set_component(&mut self, simplex: Simplex, form: AlgebroidForm) -> Result<(), Error> {
        if !self.domain.contains(&simplex) {
            return Err(Error::NotInComplex(simplex));
        }
        if form.simplex() != &simplex {
            return Err(Error::SimplexMismatch(simplex, form.simplex().clone()));
        }
        if form.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, form.degree()));
        }
        if form.is_zero() {
            self.components.remove(&simplex);
        } else {
            self.components.insert(simplex, form);
        }
        Ok(())
    }

    /// Checks the compatibility law on every (simplex, facet) incidence of
    /// the domain; on failure the witness names the incidence and prints
    /// the difference form.
    pub fn validate(&self) -> Result<(), Error> {
        for s in self.domain.simplices() {
            let local = self.component(s);
            for facet in s.facets() {
                let restricted = local.restrict_to_face(&facet)?;
                let expected = self.component(&facet);
                let diff = restricted.sub(&expected)?;
                if !diff.is_zero() {
                    return Err(Error::Incompatible {
                        simplex: s.clone(),
                        face: facet,
                        difference: diff.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Restriction morphism to a subcomplex of the domain.
    pub fn restrict_to_subcomplex(&self, sub: &SimplicialComplex) -> Result<PiecewiseForm, Error> {
        if !sub.is_subcomplex_of(&self.domain) {
            let witness = sub
                .simplices()
                .find(|s| !self.domain.contains(s))
                .cloned()
                .or_else(|| sub.simplices().next().cloned())
                .unwrap_or_else(|| Simplex::new(vec![VertexId::new("?")]).unwrap());
            return Err(Error::NotASubcomplex(witness));
        }
        let mut out = PiecewiseForm::zero(sub.clone(), self.degree);
        for s in sub.simplices() {
            out.set_component(s.clone(), self.component(s))?;
        }
        Ok(out)
    }

    fn check_same_domain(&self, other: &PiecewiseForm) -> Result<(), Error> {
        if self.domain != other.domain {
            return Err(Error::ParentMismatch(
                "piecewise forms over different domains".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &PiecewiseForm) -> Result<PiecewiseForm, Error> {
        self.check_same_domain(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = PiecewiseForm::zero(self.domain.clone(), self.degree);
        for s in self.domain.simplices() {
            out.set_component(s.clone(), self.component(s).add(&other.component(s))?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PiecewiseForm) -> Result<PiecewiseForm, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PiecewiseForm {
        PiecewiseForm {
            domain: self.domain.clone(),
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(s, f)| (s.clone(), f.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> PiecewiseForm {
        let mut out = PiecewiseForm::zero(self.domain.clone(), self.degree);
        for (s, f) in &self.components {
            out.set_component(s.clone(), f.scale(c)).expect("same domain");
        }
        out
    }

    /// Componentwise exterior product; compatibility is preserved because
    /// restriction is an algebra morphism.
    pub fn wedge(&self, other: &PiecewiseForm) -> Result<PiecewiseForm, Error> {
        self.check_same_domain(other)?;
        let mut out = PiecewiseForm::zero(self.domain.clone(), self.degree + other.degree);
        for s in self.domain.simplices() {
            out.set_component(s.clone(), self.component(s).wedge(&other.component(s))?)?;
        }
        Ok(out)
    }

    /// Componentwise total differential.
    pub fn differential(&self, algebra: &LieAlgebra) -> PiecewiseForm {
        let mut out = PiecewiseForm::zero(self.domain.clone(), self.degree + 1);
        for (s, f) in &self.components {
            out.set_component(s.clone(), f.differential(algebra))
                .expect("component stays on its simplex");
        }
        out
    }

    /// Largest term weight over all components.
    pub fn max_weight(&self) -> u32 {
        self.components
            .values()
            .map(|f| f.max_weight())
            .max()
            .unwrap_or(0)
    }

    /// Weight decomposition, componentwise; parts sum back to the family
    /// and each part of a compatible family is compatible.
    pub fn weight_components(&self) -> Vec<(u32, PiecewiseForm)> {
        let mut parts: BTreeMap<u32, PiecewiseForm> = BTreeMap::new();
        for (s, f) in &self.components {
            for (w, part) in f.weight_components() {
                parts
                    .entry(w)
                    .or_insert_with(|| PiecewiseForm::zero(self.domain.clone(), self.degree))
                    .set_component(s.clone(), part)
                    .expect("component stays on its simplex");
            }
        }
        parts.into_iter().collect()
    }
}

/// The global hat function of a vertex: `t_v` on every simplex containing
/// `v`, zero elsewhere. A compatible degree-0 family.
pub fn hat(complex: &SimplicialComplex, v: &VertexId) -> Result<PiecewiseForm, Error> {
    if !complex.vertices().contains(v) {
        return Err(Error::NotInComplex(Simplex::new(vec![v.clone()])?));
    }
    let mut out = PiecewiseForm::zero(complex.clone(), 0);
    for s in complex.simplices() {
        if s.contains_vertex(v) {
            out.set_component(s.clone(), AlgebroidForm::barycentric(s.clone(), v)?)?;
        }
    }
    Ok(out)
}

/// The constant family `ε_T` in fiber degree `|T|`.
pub fn ce_const(complex: &SimplicialComplex, dual: Vec<usize>) -> PiecewiseForm {
    let degree = dual.len();
    let mut out = PiecewiseForm::zero(complex.clone(), degree);
    for s in complex.simplices() {
        out.set_component(s.clone(), AlgebroidForm::ce_basis(s.clone(), dual.clone()))
            .expect("simplex of own domain");
    }
    out
}

/// The constant scalar family.
pub fn constant(complex: &SimplicialComplex, value: Rat) -> PiecewiseForm {
    let mut out = PiecewiseForm::zero(complex.clone(), 0);
    for s in complex.simplices() {
        out.set_component(s.clone(), AlgebroidForm::constant(s.clone(), value.clone()))
            .expect("simplex of own domain");
    }
    out
}

/// Extension morphism: given a compatible family on a subcomplex `L` of
/// `K`, produces a compatible family on `K` restricting to it. Simplices
/// of `K \ L` are filled in increasing dimension (then lexicographically):
/// vertices get zero, higher simplices a boundary extension of the already
/// assigned facets. Deterministic, and the identity when `L = K`.
pub fn extend_from_subcomplex(
    complex: &AlgebroidComplex,
    section: &PiecewiseForm,
) -> Result<PiecewiseForm, Error> {
    let k = complex.base();
    if !section.domain().is_subcomplex_of(k) {
        let witness = section
            .domain()
            .simplices()
            .find(|s| !k.contains(s))
            .cloned()
            .unwrap_or_else(|| Simplex::new(vec![VertexId::new("?")]).unwrap());
        return Err(Error::NotASubcomplex(witness));
    }
    section.validate()?;
    let mut out = PiecewiseForm::zero(k.clone(), section.degree());
    for s in section.domain().simplices() {
        out.set_component(s.clone(), section.component(s))?;
    }
    for s in k.simplices_by_dim() {
        if section.domain().contains(s) {
            continue;
        }
        if s.dim() == 0 {
            continue; // zero component
        }
        let boundary: BTreeMap<Simplex, AlgebroidForm> = s
            .facets()
            .into_iter()
            .map(|f| {
                let c = out.component(&f);
                (f, c)
            })
            .collect();
        let filled =
            forms::extend_from_boundary(complex.fiber(), s, section.degree(), &boundary)?;
        out.set_component(s.clone(), filled)?;
    }
    Ok(out)
}

/// The derived family over a star open: the simplices whose interiors tile
/// the open, over which sections restrict.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedComplex {
    parent: AlgebroidComplex,
    opening: StarOpen,
    members: Vec<Simplex>,
}

impl DerivedComplex {
    pub fn new(parent: AlgebroidComplex, opening: StarOpen) -> Result<Self, Error> {
        let members: Vec<Simplex> = open_star_members(parent.base(), &opening)?
            .into_iter()
            .collect();
        debug_assert!(!members.is_empty());
        Ok(DerivedComplex {
            parent,
            opening,
            members,
        })
    }

    pub fn opening(&self) -> &StarOpen {
        &self.opening
    }

    pub fn members(&self) -> &[Simplex] {
        &self.members
    }

    /// The closed-star carrier on which sections over the opening live.
    pub fn carrier(&self) -> SimplicialComplex {
        closed_star_subcomplex(self.parent.base(), &self.opening)
            .expect("opening validated at construction")
    }
}

/// The section of a global form over a star open, carried by the closed
/// star subcomplex: a polynomial form on the open piece extends uniquely
/// to its closure, so no information is lost.
pub fn section_over(omega: &PiecewiseForm, star: &StarOpen) -> Result<PiecewiseForm, Error> {
    let carrier = closed_star_subcomplex(omega.domain(), star)?;
    omega.restrict_to_subcomplex(&carrier)
}

/// Deterministic generator of valid piecewise forms for tests: random
/// sums of wedges of hat functions, their differentials, and constant CE
/// forms. Always a compatible family.
pub fn random_valid_form(
    rng: &mut impl rand::Rng,
    complex: &AlgebroidComplex,
    degree: usize,
) -> PiecewiseForm {
    let k = complex.base();
    let g = complex.fiber();
    let verts: Vec<VertexId> = k.vertices().into_iter().collect();
    let mut out = PiecewiseForm::zero(k.clone(), degree);
    let summands = rng.gen_range(1..=3);
    'outer: for _ in 0..summands {
        // choose fiber part size
        let t_count = if g.dim() == 0 {
            0
        } else {
            rng.gen_range(0..=degree.min(g.dim()))
        };
        let s_count = degree - t_count;
        let mut factor = if t_count > 0 {
            let subsets = crate::lie::sorted_subsets(g.dim(), t_count);
            let t = subsets[rng.gen_range(0..subsets.len())].clone();
            ce_const(k, t)
        } else {
            constant(k, crate::rat(rng.gen_range(-2..=2)))
        };
        for _ in 0..s_count {
            let v = &verts[rng.gen_range(0..verts.len())];
            let dh = hat(k, v).expect("vertex of complex").differential(g);
            factor = match factor.wedge(&dh) {
                Ok(f) => f,
                Err(_) => continue 'outer,
            };
        }
        // polynomial prefactor
        for _ in 0..rng.gen_range(0..=1) {
            let v = &verts[rng.gen_range(0..verts.len())];
            let h = hat(k, v).expect("vertex of complex");
            factor = h.wedge(&factor).expect("degree 0 wedge");
        }
        out = out.add(&factor).expect("same domain and degree");
    }
    out
}

/// A single local term promoted naively to a family: the given form on one
/// simplex and zero elsewhere. Generally *not* compatible; used as a
/// negative control in tests.
pub fn single_component(
    domain: &SimplicialComplex,
    form: AlgebroidForm,
) -> Result<PiecewiseForm, Error> {
    let mut out = PiecewiseForm::zero(domain.clone(), form.degree());
    out.set_component(form.simplex().clone(), form)?;
    Ok(out)
}

/// Convenience: the family whose every component is the same constant CE
/// term scaled by a polynomial in hats is built from the public
/// generators; this helper just wires a raw term for io and tests.
pub fn term_on_simplex(
    domain: &SimplicialComplex,
    simplex: &Simplex,
    key: TermKey,
    poly: Poly,
) -> Result<PiecewiseForm, Error> {
    let degree = key.degree();
    let mut form = AlgebroidForm::zero(simplex.clone(), degree);
    form.add_term(key, poly);
    single_component(domain, form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::rat;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn sx(names: &[&str]) -> Simplex {
        Simplex::from_names(names).unwrap()
    }

    fn v(name: &str) -> VertexId {
        VertexId::new(name)
    }

    /// Triangle boundary: three edges glued in a circle.
    fn s1() -> SimplicialComplex {
        SimplicialComplex::closure(&[
            sx(&["v0", "v1"]),
            sx(&["v1", "v2"]),
            sx(&["v0", "v2"]),
        ])
    }

    fn full_triangle() -> SimplicialComplex {
        SimplicialComplex::closure(&[sx(&["v0", "v1", "v2"])])
    }

    #[test]
    fn hats_are_compatible_and_sum_to_one() {
        let k = full_triangle();
        let mut sum = PiecewiseForm::zero(k.clone(), 0);
        for name in ["v0", "v1", "v2"] {
            let h = hat(&k, &v(name)).unwrap();
            h.validate().unwrap();
            sum = sum.add(&h).unwrap();
        }
        assert_eq!(sum, constant(&k, rat(1)));
    }

    #[test]
    fn invalid_family_is_detected_with_witness() {
        let k = s1();
        // t_v1 on one edge only: breaks at the vertex v1
        let edge = sx(&["v0", "v1"]);
        let bad = single_component(
            &k,
            AlgebroidForm::barycentric(edge.clone(), &v("v1")).unwrap(),
        )
        .unwrap();
        match bad.validate() {
            Err(Error::Incompatible { simplex, face, .. }) => {
                assert_eq!(simplex, edge);
                assert_eq!(face, sx(&["v1"]));
            }
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn differential_and_wedge_preserve_compatibility() {
        let mut rng = StdRng::seed_from_u64(41);
        let ac = AlgebroidComplex::new(s1(), crate::lie::tests::aff1()).unwrap();
        for _ in 0..30 {
            let a = random_valid_form(&mut rng, &ac, 1);
            let b = random_valid_form(&mut rng, &ac, 0);
            a.validate().unwrap();
            a.differential(ac.fiber()).validate().unwrap();
            a.wedge(&b).unwrap().validate().unwrap();
            a.add(&a).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn restriction_to_subcomplex_and_functoriality() {
        let mut rng = StdRng::seed_from_u64(43);
        let k = full_triangle();
        let ac = AlgebroidComplex::new(k.clone(), crate::lie::tests::aff1()).unwrap();
        let l = s1();
        let m = SimplicialComplex::closure(&[sx(&["v0", "v1"])]);
        for _ in 0..20 {
            let omega = random_valid_form(&mut rng, &ac, 1);
            let via = omega
                .restrict_to_subcomplex(&l)
                .unwrap()
                .restrict_to_subcomplex(&m)
                .unwrap();
            let direct = omega.restrict_to_subcomplex(&m).unwrap();
            assert_eq!(via, direct);
        }
        // non-subcomplex rejected
        let other = SimplicialComplex::closure(&[sx(&["v0", "v3"])]);
        assert!(matches!(
            constant(&k, rat(1)).restrict_to_subcomplex(&other),
            Err(Error::NotASubcomplex(_))
        ));
    }

    #[test]
    fn extension_splits_restriction() {
        let mut rng = StdRng::seed_from_u64(47);
        let k = full_triangle();
        let ac = AlgebroidComplex::new(k.clone(), crate::lie::tests::aff1()).unwrap();
        let l = s1();
        for degree in 0..=2usize {
            for _ in 0..8 {
                let omega = random_valid_form(&mut rng, &ac, degree);
                let boundary = omega.restrict_to_subcomplex(&l).unwrap();
                let extended = extend_from_subcomplex(&ac, &boundary).unwrap();
                extended.validate().unwrap();
                assert_eq!(extended.restrict_to_subcomplex(&l).unwrap(), boundary);
            }
        }
    }

    #[test]
    fn extension_of_whole_complex_is_identity() {
        let mut rng = StdRng::seed_from_u64(53);
        let ac = AlgebroidComplex::new(s1(), LieAlgebra::trivial()).unwrap();
        let omega = random_valid_form(&mut rng, &ac, 1);
        let again = extend_from_subcomplex(&ac, &omega).unwrap();
        assert_eq!(again, omega);
    }

    #[test]
    fn weight_parts_are_homogeneous_and_sum_back() {
        // weight is a filtration, not a grading: restriction to a face that
        // drops the anchor lowers polynomial degree, so the parts of a
        // compatible family need not be compatible individually. They are
        // still weight homogeneous and sum back to the family.
        let mut rng = StdRng::seed_from_u64(59);
        let ac = AlgebroidComplex::new(full_triangle(), crate::lie::tests::aff1()).unwrap();
        for _ in 0..20 {
            let omega = random_valid_form(&mut rng, &ac, 1);
            let mut sum = PiecewiseForm::zero(ac.base().clone(), 1);
            for (w, part) in omega.weight_components() {
                for (_, local) in part.components() {
                    for (lw, _) in local.weight_components() {
                        assert_eq!(lw, w);
                    }
                }
                sum = sum.add(&part).unwrap();
            }
            assert_eq!(sum, omega);
        }
    }
}
