//! The sheaf layer on the star basis: presheaf law checks, cover
//! certification, gluing, and fineness via piecewise-rational partitions
//! of unity.
//!
//! Partition functions are quotients `Π_{v∈σ_j} t_v / Σ_k Π_{v∈σ_k} t_v`.
//! The denominator is a sum of barycentric monomials of cover centers; the
//! cover condition gives every closed simplex a member monomial that is
//! positive on its interior, which certifies strict positivity of the
//! denominator combinatorially — no analysis, no floats.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::One;

use crate::complex::{
    closed_star_subcomplex, star_intersection, Cover, Simplex, SimplicialComplex, StarOpen,
};
use crate::error::Error;
use crate::lie::LieAlgebra;
use crate::piecewise::{self, AlgebroidComplex, PiecewiseForm};
use crate::Rat;

/// A quotient of piecewise forms: a numerator family of degree `p` over a
/// degree-0 denominator family. Equality is by cross-multiplication, so no
/// normal form for the quotient is ever needed.
#[derive(Debug, Clone)]
pub struct RationalPiecewiseForm {
    num: PiecewiseForm,
    den: PiecewiseForm,
}

impl RationalPiecewiseForm {
    pub fn new(num: PiecewiseForm, den: PiecewiseForm) -> Result<Self, Error> {
        if num.domain() != den.domain() {
            return Err(Error::ParentMismatch(
                "numerator and denominator over different domains".into(),
            ));
        }
        if den.degree() != 0 {
            return Err(Error::DegreeMismatch(0, den.degree()));
        }
        Ok(RationalPiecewiseForm { num, den })
    }

    /// A polynomial form viewed in the rational tier (denominator 1).
    pub fn from_polynomial(num: PiecewiseForm) -> Self {
        let den = piecewise::constant(num.domain(), Rat::one());
        RationalPiecewiseForm { num, den }
    }

    pub fn numerator(&self) -> &PiecewiseForm {
        &self.num
    }

    pub fn denominator(&self) -> &PiecewiseForm {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cross-multiplication equality: `a/b = c/d  iff  a∧d = c∧b`.
    pub fn equals(&self, other: &RationalPiecewiseForm) -> Result<bool, Error> {
        let left = self.num.wedge(&other.den)?;
        let right = other.num.wedge(&self.den)?;
        Ok(left == right)
    }

    pub fn add(&self, other: &RationalPiecewiseForm) -> Result<RationalPiecewiseForm, Error> {
        if self.den == other.den {
            return RationalPiecewiseForm::new(self.num.add(&other.num)?, self.den.clone());
        }
        let num = self
            .num
            .wedge(&other.den)?
            .add(&other.num.wedge(&self.den)?)?;
        RationalPiecewiseForm::new(num, self.den.wedge(&other.den)?)
    }

    pub fn neg(&self) -> RationalPiecewiseForm {
        RationalPiecewiseForm {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalPiecewiseForm) -> Result<RationalPiecewiseForm, Error> {
        self.add(&other.neg())
    }

    pub fn wedge(&self, other: &RationalPiecewiseForm) -> Result<RationalPiecewiseForm, Error> {
        RationalPiecewiseForm::new(self.num.wedge(&other.num)?, self.den.wedge(&other.den)?)
    }

    /// Quotient rule: `D(n/d) = (D(n)·d − (−1)^p n ∧ D(d)) / d²`, the sign
    /// coming from moving D past the degree-p numerator.
    pub fn differential(&self, algebra: &LieAlgebra) -> Result<RationalPiecewiseForm, Error> {
        let correction = self.num.wedge(&self.den.differential(algebra))?;
        let num = if self.num.degree() % 2 == 0 {
            self.num.differential(algebra).wedge(&self.den)?.sub(&correction)?
        } else {
            self.num.differential(algebra).wedge(&self.den)?.add(&correction)?
        };
        RationalPiecewiseForm::new(num, self.den.wedge(&self.den)?)
    }

    pub fn restrict_to_subcomplex(
        &self,
        sub: &SimplicialComplex,
    ) -> Result<RationalPiecewiseForm, Error> {
        RationalPiecewiseForm::new(
            self.num.restrict_to_subcomplex(sub)?,
            self.den.restrict_to_subcomplex(sub)?,
        )
    }
}

/// A partition of unity subordinate to a star cover. Functions are stored
/// over the shared canonical denominator, so the unit sum is the exact
/// polynomial identity `Σ_j numerator_j = denominator`.
#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    cover: Cover,
    functions: Vec<RationalPiecewiseForm>,
}

impl PartitionOfUnity {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn functions(&self) -> &[RationalPiecewiseForm] {
        &self.functions
    }
}

/// A family of sections indexed by cover members, each over the member's
/// closed star carrier.
#[derive(Debug, Clone)]
pub struct SectionFamily {
    assignments: BTreeMap<StarOpen, PiecewiseForm>,
}

impl SectionFamily {
    pub fn new(assignments: BTreeMap<StarOpen, PiecewiseForm>) -> Self {
        SectionFamily { assignments }
    }

    pub fn get(&self, star: &StarOpen) -> Option<&PiecewiseForm> {
        self.assignments.get(star)
    }

    pub fn assignments(&self) -> impl Iterator<Item = (&StarOpen, &PiecewiseForm)> {
        self.assignments.iter()
    }
}

/// Checks that the open stars of the cover members cover `|K|`: every
/// simplex interior must lie in some member, i.e. every simplex must
/// contain some center. The witness is the smallest uncovered simplex.
pub fn is_cover(complex: &SimplicialComplex, cover: &Cover) -> Result<(), Error> {
    for member in cover.members() {
        if !complex.contains(member.center()) {
            return Err(Error::NotInComplex(member.center().clone()));
        }
    }
    for s in complex.simplices_by_dim() {
        if !cover
            .members()
            .iter()
            .any(|m| m.center().is_face_of(s))
        {
            return Err(Error::MissingSimplex(s.clone()));
        }
    }
    Ok(())
}

/// The barycentric monomial family of one center: `Π_{v∈σ} t_v` as a
/// compatible degree-0 family (zero on simplices not containing `σ`).
fn center_monomial(complex: &SimplicialComplex, center: &Simplex) -> Result<PiecewiseForm, Error> {
    let mut out = piecewise::constant(complex, Rat::one());
    for v in center.vertices() {
        out = out.wedge(&piecewise::hat(complex, v)?)?;
    }
    Ok(out)
}

/// Builds the partition of unity
/// `φ_j = Π_{v∈σ_j} t_v / Σ_k Π_{v∈σ_k} t_v` subordinate to the cover.
pub fn partition_of_unity(
    complex: &SimplicialComplex,
    cover: &Cover,
) -> Result<PartitionOfUnity, Error> {
    if let Err(e) = is_cover(complex, cover) {
        return Err(match e {
            Error::MissingSimplex(s) => Error::NotACover(s),
            other => other,
        });
    }
    let numerators: Vec<PiecewiseForm> = cover
        .members()
        .iter()
        .map(|m| center_monomial(complex, m.center()))
        .collect::<Result<_, _>>()?;
    let mut den = piecewise::PiecewiseForm::zero(complex.clone(), 0);
    for n in &numerators {
        den = den.add(n)?;
    }
    let functions = numerators
        .into_iter()
        .map(|num| RationalPiecewiseForm::new(num, den.clone()))
        .collect::<Result<_, _>>()?;
    Ok(PartitionOfUnity {
        cover: cover.clone(),
        functions,
    })
}

/// Verifies the two defining identities of a partition of unity exactly:
/// the numerators sum to the shared denominator, and each function is
/// identically zero on every simplex not containing its center.
pub fn certify_partition(
    complex: &SimplicialComplex,
    partition: &PartitionOfUnity,
) -> Result<(), Error> {
    let den = partition.functions()[0].denominator();
    let mut sum = PiecewiseForm::zero(complex.clone(), 0);
    for f in partition.functions() {
        if f.denominator() != den {
            return Err(Error::LawViolation {
                law: "shared canonical denominator".into(),
                witness: "denominators differ between members".into(),
            });
        }
        sum = sum.add(f.numerator())?;
    }
    if &sum != den {
        return Err(Error::LawViolation {
            law: "unit sum".into(),
            witness: format!("Σ numerators ≠ denominator over {} members", partition.functions().len()),
        });
    }
    for (member, f) in partition.cover().members().iter().zip(partition.functions()) {
        for s in complex.simplices() {
            if !member.center().is_face_of(s) && !f.numerator().component(s).is_zero() {
                return Err(Error::LawViolation {
                    law: "subordination".into(),
                    witness: format!("{} does not vanish on {s}", member),
                });
            }
        }
    }
    Ok(())
}

/// The fineness endomorphisms `h_j(ω) = φ_j · ω`; they sum to `ω` exactly
/// because the numerators sum to the denominator.
pub fn fineness_operators(
    partition: &PartitionOfUnity,
    omega: &PiecewiseForm,
) -> Result<Vec<RationalPiecewiseForm>, Error> {
    partition
        .functions()
        .iter()
        .map(|phi| phi.wedge(&RationalPiecewiseForm::from_polynomial(omega.clone())))
        .collect()
}

/// Gluing on the star basis: if the sections agree on every pairwise star
/// intersection, returns the unique global form restricting to all of
/// them; otherwise reports the first disagreement with its witness
/// simplex and difference form.
pub fn check_gluing(
    parent: &AlgebroidComplex,
    cover: &Cover,
    sections: &SectionFamily,
) -> Result<PiecewiseForm, Error> {
    let k = parent.base();
    is_cover(k, cover)?;
    let mut degree = None;
    for member in cover.members() {
        let section = sections
            .get(member)
            .ok_or_else(|| Error::NotInComplex(member.center().clone()))?;
        let carrier = closed_star_subcomplex(k, member)?;
        if section.domain() != &carrier {
            return Err(Error::ParentMismatch(format!(
                "section over {member} is not carried by its closed star"
            )));
        }
        section.validate()?;
        match degree {
            None => degree = Some(section.degree()),
            Some(d) if d == section.degree() => {}
            Some(d) => return Err(Error::DegreeMismatch(d, section.degree())),
        }
    }
    let degree = degree.expect("nonempty cover");
    // pairwise agreement on star intersections
    for (u, v) in cover.members().iter().tuple_combinations() {
        let Some(w) = star_intersection(k, u, v)? else {
            continue;
        };
        let carrier = closed_star_subcomplex(k, &w)?;
        let left = sections.get(u).unwrap().restrict_to_subcomplex(&carrier)?;
        let right = sections.get(v).unwrap().restrict_to_subcomplex(&carrier)?;
        for s in carrier.simplices() {
            let diff = left.component(s).sub(&right.component(s))?;
            if !diff.is_zero() {
                return Err(Error::GluingIncompatible {
                    left: u.center().clone(),
                    right: v.center().clone(),
                    simplex: s.clone(),
                    difference: diff.to_string(),
                });
            }
        }
    }
    // assemble: every simplex contains some center, take that section's value
    let mut glued = PiecewiseForm::zero(k.clone(), degree);
    for s in k.simplices() {
        let member = cover
            .members()
            .iter()
            .find(|m| m.center().is_face_of(s))
            .expect("cover certified above");
        glued.set_component(s.clone(), sections.get(member).unwrap().component(s))?;
    }
    glued.validate().expect("pairwise agreement implies a compatible assembly");
    Ok(glued)
}

/// Checks the presheaf laws on a star chain `W ⊆ V ⊆ U` (containment of
/// opens means reverse containment of centers): identity, composition,
/// and the cochain-algebra morphism property of restriction, on the
/// supplied section.
pub fn check_presheaf_laws(
    parent: &AlgebroidComplex,
    chain: (&StarOpen, &StarOpen, &StarOpen),
    omega: &PiecewiseForm,
) -> Result<(), Error> {
    check_presheaf_laws_with(parent, chain, omega, |form, sub| {
        form.restrict_to_subcomplex(sub)
    })
}

/// Implementation with a pluggable restriction, so the test suite can
/// inject a corrupted restriction and watch the laws fail.
pub(crate) fn check_presheaf_laws_with<F>(
    parent: &AlgebroidComplex,
    (u, v, w): (&StarOpen, &StarOpen, &StarOpen),
    omega: &PiecewiseForm,
    restrict: F,
) -> Result<(), Error>
where
    F: Fn(&PiecewiseForm, &SimplicialComplex) -> Result<PiecewiseForm, Error>,
{
    let k = parent.base();
    if !u.center().is_face_of(v.center()) || !v.center().is_face_of(w.center()) {
        return Err(Error::NotAFace {
            face: u.center().clone(),
            of: w.center().clone(),
        });
    }
    let cu = closed_star_subcomplex(k, u)?;
    let cv = closed_star_subcomplex(k, v)?;
    let cw = closed_star_subcomplex(k, w)?;
    if omega.domain() != &cu {
        return Err(Error::ParentMismatch(
            "section is not carried by the closed star of the outer open".into(),
        ));
    }
    // identity
    if &restrict(omega, &cu)? != omega {
        return Err(Error::LawViolation {
            law: "identity".into(),
            witness: format!("r^U_U ≠ id over {u}"),
        });
    }
    // composition
    let via = restrict(&restrict(omega, &cv)?, &cw)?;
    let direct = restrict(omega, &cw)?;
    if via != direct {
        return Err(Error::LawViolation {
            law: "composition".into(),
            witness: format!("r^V_W ∘ r^U_V ≠ r^U_W on the chain {u} ⊇ {v} ⊇ {w}"),
        });
    }
    // cochain-algebra morphism: commutes with D and with wedge
    let g = parent.fiber();
    if restrict(&omega.differential(g), &cv)? != restrict(omega, &cv)?.differential(g) {
        return Err(Error::LawViolation {
            law: "differential morphism".into(),
            witness: format!("restriction to {v} does not commute with D"),
        });
    }
    let square = omega.wedge(omega)?;
    let rs = restrict(omega, &cv)?;
    if restrict(&square, &cv)? != rs.wedge(&rs)? {
        return Err(Error::LawViolation {
            law: "wedge morphism".into(),
            witness: format!("restriction to {v} does not commute with ∧"),
        });
    }
    Ok(())
}
