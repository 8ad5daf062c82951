//! Finite simplicial-complex combinatorics: faces, subcomplexes, carriers,
//! stars, the regular-open star basis, and covers.
//!
//! Vertices are ordered lexicographically by name; the minimum vertex of a
//! simplex is its *anchor* and fixes the coordinate elimination used by the
//! polynomial form algebra. All values are immutable after construction and
//! every operation is a pure function.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};

use crate::error::Error;
use crate::Rat;

/// A vertex, identified by its name. The global vertex order is the
/// lexicographic order on names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

/// A closed simplex: a sorted, duplicate-free, nonempty set of vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    /// Builds a simplex from a vertex list. Rejects empty lists, empty
    /// names and duplicate vertices.
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, Error> {
        let names: Vec<String> = vertices.iter().map(|v| v.name().to_owned()).collect();
        if vertices.is_empty() || vertices.iter().any(|v| v.name().is_empty()) {
            return Err(Error::MalformedSimplex(names));
        }
        let mut sorted = vertices;
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSimplex(names));
        }
        Ok(Simplex { vertices: sorted })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, Error> {
        Simplex::new(names.iter().map(|n| VertexId::new(n.as_ref())).collect())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The anchor vertex: the lexicographic minimum. Its barycentric
    /// coordinate is the one eliminated in the polynomial model.
    pub fn anchor(&self) -> &VertexId {
        &self.vertices[0]
    }

    /// The non-anchor vertices, i.e. the free coordinates of the simplex.
    pub fn free_vertices(&self) -> &[VertexId] {
        &self.vertices[1..]
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.vertices.iter().all(|v| other.contains_vertex(v))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity((1 << n) - 1);
        for mask in 1u32..(1 << n) {
            let vs: Vec<VertexId> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.vertices[i].clone())
                .collect();
            out.push(Simplex { vertices: vs });
        }
        out
    }

    /// Codimension-one faces. Empty for a vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| {
                let mut vs = self.vertices.clone();
                vs.remove(i);
                Simplex { vertices: vs }
            })
            .collect()
    }

    /// Union of vertex sets; a simplex of the complex when the two stars
    /// intersect.
    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut vs: BTreeSet<VertexId> = self.vertices.iter().cloned().collect();
        vs.extend(other.vertices.iter().cloned());
        Simplex {
            vertices: vs.into_iter().collect(),
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A finite, face-closed set of simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    /// The smallest face-closed complex containing all generators.
    pub fn closure(generators: &[Simplex]) -> SimplicialComplex {
        let mut simplices = BTreeSet::new();
        for g in generators {
            for f in g.faces() {
                simplices.insert(f);
            }
        }
        SimplicialComplex { simplices }
    }

    /// Builds a complex from an explicit simplex set, checking face closure.
    pub fn from_simplices(simplices: BTreeSet<Simplex>) -> Result<Self, Error> {
        for s in &simplices {
            for f in s.faces() {
                if !simplices.contains(&f) {
                    return Err(Error::NotASubcomplex(f));
                }
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    /// Simplices ordered by (dimension, lexicographic), the processing
    /// order of the extension operator.
    pub fn simplices_by_dim(&self) -> Vec<&Simplex> {
        let mut v: Vec<&Simplex> = self.simplices.iter().collect();
        v.sort_by_key(|s| (s.dim(), s.vertices().to_vec()));
        v
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.simplices.iter().map(|s| s.dim()).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.simplices
            .iter()
            .flat_map(|s| s.vertices().iter().cloned())
            .collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }

    /// Simplices of dimension `d`, in lexicographic order.
    pub fn simplices_of_dim(&self, d: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.dim() == d).collect()
    }
}

/// A point of `|K|` in exact barycentric coordinates with explicit support.
#[derive(Debug, Clone, PartialEq)]
pub struct PointBary {
    carrier_candidate: Simplex,
    coords: BTreeMap<VertexId, Rat>,
}

impl PointBary {
    /// Coordinates must be keyed exactly by the carrier's vertices, all
    /// strictly positive, and sum to one.
    pub fn new(carrier_candidate: Simplex, coords: BTreeMap<VertexId, Rat>) -> Result<Self, Error> {
        let keys: BTreeSet<&VertexId> = coords.keys().collect();
        let verts: BTreeSet<&VertexId> = carrier_candidate.vertices().iter().collect();
        if keys != verts {
            return Err(Error::InvalidPoint(
                "coordinate keys must be exactly the carrier candidate's vertices".into(),
            ));
        }
        if coords.values().any(|c| *c <= Rat::zero()) {
            return Err(Error::InvalidPoint(
                "all barycentric coordinates must be strictly positive".into(),
            ));
        }
        let sum: Rat = coords.values().cloned().sum();
        if !sum.is_one() {
            return Err(Error::InvalidPoint(format!(
                "coordinates sum to {sum}, expected 1"
            )));
        }
        Ok(PointBary {
            carrier_candidate,
            coords,
        })
    }

    pub fn carrier_candidate(&self) -> &Simplex {
        &self.carrier_candidate
    }

    pub fn coords(&self) -> &BTreeMap<VertexId, Rat> {
        &self.coords
    }
}

/// A basis element of the regular-open topology: the open star of a
/// simplex of the complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StarOpen {
    center: Simplex,
}

impl StarOpen {
    pub fn new(center: Simplex) -> Self {
        StarOpen { center }
    }

    pub fn center(&self) -> &Simplex {
        &self.center
    }
}

impl fmt::Display for StarOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "St {}", self.center)
    }
}

/// A finite list of star opens used as an open cover of `|K|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    members: Vec<StarOpen>,
}

impl Cover {
    pub fn new(members: Vec<StarOpen>) -> Self {
        Cover { members }
    }

    pub fn members(&self) -> &[StarOpen] {
        &self.members
    }
}

/// The unique simplex whose interior contains the point: the simplex whose
/// vertex set is exactly the positive-coordinate support.
pub fn carrier(complex: &SimplicialComplex, point: &PointBary) -> Result<Simplex, Error> {
    if !complex.contains(point.carrier_candidate()) {
        return Err(Error::NotInComplex(point.carrier_candidate().clone()));
    }
    Ok(point.carrier_candidate().clone())
}

/// The generalized star of a point, which coincides with the star of its
/// carrier.
pub fn generalized_star(complex: &SimplicialComplex, point: &PointBary) -> Result<StarOpen, Error> {
    Ok(StarOpen::new(carrier(complex, point)?))
}

/// The simplices whose interiors make up the open star: all simplices
/// containing the center. These index the derived family over the star.
pub fn open_star_members(
    complex: &SimplicialComplex,
    star: &StarOpen,
) -> Result<BTreeSet<Simplex>, Error> {
    if !complex.contains(star.center()) {
        return Err(Error::NotInComplex(star.center().clone()));
    }
    Ok(complex
        .simplices()
        .filter(|s| star.center().is_face_of(s))
        .cloned()
        .collect())
}

/// Intersection of two star basis elements: `St s ∩ St t = St(s ∪ t)` when
/// the union is a simplex of the complex, and empty otherwise.
pub fn star_intersection(
    complex: &SimplicialComplex,
    left: &StarOpen,
    right: &StarOpen,
) -> Result<Option<StarOpen>, Error> {
    for star in [left, right] {
        if !complex.contains(star.center()) {
            return Err(Error::NotInComplex(star.center().clone()));
        }
    }
    let union = left.center().union(right.center());
    Ok(if complex.contains(&union) {
        Some(StarOpen::new(union))
    } else {
        None
    })
}

/// Closure of the open star members: the carrier subcomplex on which
/// sections over the star live in the polynomial model.
pub fn closed_star_subcomplex(
    complex: &SimplicialComplex,
    star: &StarOpen,
) -> Result<SimplicialComplex, Error> {
    let members: Vec<Simplex> = open_star_members(complex, star)?.into_iter().collect();
    Ok(SimplicialComplex::closure(&members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn s1() -> SimplicialComplex {
        SimplicialComplex::closure(&[
            Simplex::from_names(&["v0", "v1"]).unwrap(),
            Simplex::from_names(&["v1", "v2"]).unwrap(),
            Simplex::from_names(&["v0", "v2"]).unwrap(),
        ])
    }

    fn t2() -> SimplicialComplex {
        SimplicialComplex::closure(&[Simplex::from_names(&["v0", "v1", "v2"]).unwrap()])
    }

    fn sx(names: &[&str]) -> Simplex {
        Simplex::from_names(names).unwrap()
    }

    #[test]
    fn closure_of_circle_has_six_simplices() {
        assert_eq!(s1().len(), 6);
    }

    #[test]
    fn closure_of_triangle_has_seven_simplices() {
        assert_eq!(t2().len(), 7);
    }

    #[test]
    fn duplicate_vertex_is_malformed() {
        assert!(matches!(
            Simplex::from_names(&["v0", "v0"]),
            Err(Error::MalformedSimplex(_))
        ));
    }

    #[test]
    fn face_closure_holds_for_all_generated_complexes() {
        for complex in [s1(), t2()] {
            for s in complex.simplices() {
                for f in s.faces() {
                    assert!(complex.contains(&f));
                }
            }
        }
    }

    #[test]
    fn carrier_of_edge_midpoint() {
        let k = t2();
        let edge = sx(&["v0", "v1"]);
        let point = PointBary::new(
            edge.clone(),
            [("v0".into(), ratio(1, 2)), ("v1".into(), ratio(1, 2))].into(),
        )
        .unwrap();
        assert_eq!(carrier(&k, &point).unwrap(), edge);
    }

    #[test]
    fn carrier_of_barycenter_is_top_simplex() {
        let k = t2();
        let top = sx(&["v0", "v1", "v2"]);
        let point = PointBary::new(
            top.clone(),
            [
                ("v0".into(), ratio(1, 3)),
                ("v1".into(), ratio(1, 3)),
                ("v2".into(), ratio(1, 3)),
            ]
            .into(),
        )
        .unwrap();
        assert_eq!(carrier(&k, &point).unwrap(), top);
    }

    #[test]
    fn carrier_of_vertex_point() {
        let k = s1();
        let v = sx(&["v0"]);
        let point = PointBary::new(v.clone(), [("v0".into(), rat(1))].into()).unwrap();
        assert_eq!(carrier(&k, &point).unwrap(), v);
    }

    #[test]
    fn carrier_rejects_foreign_simplex() {
        let k = s1();
        let top = sx(&["v0", "v1", "v2"]);
        let point = PointBary::new(
            top,
            [
                ("v0".into(), ratio(1, 3)),
                ("v1".into(), ratio(1, 3)),
                ("v2".into(), ratio(1, 3)),
            ]
            .into(),
        )
        .unwrap();
        assert!(matches!(carrier(&k, &point), Err(Error::NotInComplex(_))));
    }

    #[test]
    fn generalized_star_of_edge_point_is_edge_star() {
        let k = t2();
        let edge = sx(&["v0", "v1"]);
        let point = PointBary::new(
            edge.clone(),
            [("v0".into(), ratio(1, 2)), ("v1".into(), ratio(1, 2))].into(),
        )
        .unwrap();
        assert_eq!(generalized_star(&k, &point).unwrap(), StarOpen::new(edge));
    }

    #[test]
    fn generalized_star_of_vertex_is_vertex_star() {
        let k = t2();
        let v = sx(&["v0"]);
        let point = PointBary::new(v.clone(), [("v0".into(), rat(1))].into()).unwrap();
        assert_eq!(generalized_star(&k, &point).unwrap(), StarOpen::new(v));
    }

    #[test]
    fn open_star_members_of_vertex() {
        let k = t2();
        let members = open_star_members(&k, &StarOpen::new(sx(&["v0"]))).unwrap();
        let expected: BTreeSet<Simplex> = [
            sx(&["v0"]),
            sx(&["v0", "v1"]),
            sx(&["v0", "v2"]),
            sx(&["v0", "v1", "v2"]),
        ]
        .into();
        assert_eq!(members, expected);
    }

    #[test]
    fn open_star_of_top_simplex_is_itself() {
        let k = t2();
        let members = open_star_members(&k, &StarOpen::new(sx(&["v0", "v1", "v2"]))).unwrap();
        assert_eq!(members, [sx(&["v0", "v1", "v2"])].into());
    }

    #[test]
    fn open_star_members_on_circle() {
        let k = s1();
        let members = open_star_members(&k, &StarOpen::new(sx(&["v1"]))).unwrap();
        let expected: BTreeSet<Simplex> =
            [sx(&["v1"]), sx(&["v0", "v1"]), sx(&["v1", "v2"])].into();
        assert_eq!(members, expected);
    }

    #[test]
    fn star_intersection_of_adjacent_vertices() {
        let k = t2();
        let meet = star_intersection(
            &k,
            &StarOpen::new(sx(&["v0"])),
            &StarOpen::new(sx(&["v1"])),
        )
        .unwrap();
        assert_eq!(meet, Some(StarOpen::new(sx(&["v0", "v1"]))));
    }

    #[test]
    fn star_intersection_empty_on_path_endpoints() {
        let path = SimplicialComplex::closure(&[sx(&["v0", "v1"]), sx(&["v1", "v2"])]);
        let meet = star_intersection(
            &path,
            &StarOpen::new(sx(&["v0"])),
            &StarOpen::new(sx(&["v2"])),
        )
        .unwrap();
        assert_eq!(meet, None);
    }

    #[test]
    fn star_intersection_idempotent() {
        let k = s1();
        let e = StarOpen::new(sx(&["v0", "v1"]));
        assert_eq!(star_intersection(&k, &e, &e).unwrap(), Some(e.clone()));
    }

    /// Brute-force check of the star-basis intersection law against
    /// direct intersection of open-star member sets.
    #[test]
    fn star_basis_intersection_law() {
        for k in [s1(), t2()] {
            let all: Vec<Simplex> = k.simplices().cloned().collect();
            for a in &all {
                for b in &all {
                    let sa = StarOpen::new(a.clone());
                    let sb = StarOpen::new(b.clone());
                    let ma = open_star_members(&k, &sa).unwrap();
                    let mb = open_star_members(&k, &sb).unwrap();
                    let brute: BTreeSet<Simplex> = ma.intersection(&mb).cloned().collect();
                    match star_intersection(&k, &sa, &sb).unwrap() {
                        Some(meet) => {
                            assert_eq!(brute, open_star_members(&k, &meet).unwrap());
                        }
                        None => assert!(brute.is_empty()),
                    }
                }
            }
        }
    }

    /// Star monotonicity: face containment reverses star containment.
    #[test]
    fn star_monotonicity() {
        let k = t2();
        let all: Vec<Simplex> = k.simplices().cloned().collect();
        for a in &all {
            for b in &all {
                let ma = open_star_members(&k, &StarOpen::new(a.clone())).unwrap();
                let mb = open_star_members(&k, &StarOpen::new(b.clone())).unwrap();
                assert_eq!(a.is_face_of(b), mb.is_subset(&ma));
            }
        }
    }

    #[test]
    fn closed_star_on_circle_excludes_opposite_edge() {
        let k = s1();
        let sub = closed_star_subcomplex(&k, &StarOpen::new(sx(&["v0"]))).unwrap();
        assert_eq!(sub.len(), 5);
        assert!(!sub.contains(&sx(&["v1", "v2"])));
    }

    #[test]
    fn closed_star_of_cone_point_is_everything() {
        let k = t2();
        for center in [sx(&["v0"]), sx(&["v0", "v1", "v2"])] {
            let sub = closed_star_subcomplex(&k, &StarOpen::new(center)).unwrap();
            assert_eq!(sub, k);
        }
    }

    #[test]
    fn point_rejects_bad_coordinates() {
        let edge = sx(&["v0", "v1"]);
        assert!(PointBary::new(
            edge.clone(),
            [("v0".into(), ratio(1, 2)), ("v1".into(), ratio(1, 3))].into()
        )
        .is_err());
        assert!(PointBary::new(
            edge.clone(),
            [("v0".into(), rat(1)), ("v1".into(), rat(0))].into()
        )
        .is_err());
        assert!(PointBary::new(edge, [("v0".into(), rat(1))].into()).is_err());
    }
}
