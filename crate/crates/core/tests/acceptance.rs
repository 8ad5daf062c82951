//! End-to-end acceptance suite. Each criterion prints one pass/fail line;
//! run with `--nocapture` to see them on success.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pwforms::cohomology::{betti, differential_rank, kunneth_oracle};
use pwforms::complex::{closed_star_subcomplex, Cover, Simplex, SimplicialComplex, StarOpen, VertexId};
use pwforms::error::Error;
use pwforms::lie::LieAlgebra;
use pwforms::linalg::PivotStrategy;
use pwforms::piecewise::{
    constant, extend_from_subcomplex, hat, random_valid_form, section_over, AlgebroidComplex,
};
use pwforms::sheaf::{
    certify_partition, check_gluing, check_presheaf_laws, fineness_operators, partition_of_unity,
    RationalPiecewiseForm, SectionFamily,
};
use pwforms::rat;

use common::*;

fn criterion(n: usize, name: &str, body: impl FnOnce() + UnwindSafe) {
    let result = catch_unwind(body);
    match &result {
        Ok(()) => println!("acceptance criterion {n} ({name}): PASS"),
        Err(_) => println!("acceptance criterion {n} ({name}): FAIL"),
    }
    if let Err(e) = result {
        resume_unwind(e);
    }
}

/// The six reference (base, fiber) pairs with their expected Betti vectors.
fn reference_cases() -> Vec<(&'static str, SimplicialComplex, LieAlgebra, Vec<usize>)> {
    vec![
        ("circle/trivial", s1(), LieAlgebra::trivial(), vec![1, 1]),
        ("triangle/trivial", t2(), LieAlgebra::trivial(), vec![1, 0, 0]),
        ("tetra boundary/trivial", boundary_tetra(), LieAlgebra::trivial(), vec![1, 0, 1]),
        ("circle/aff1", s1(), aff1(), vec![1, 2, 1]),
        ("tetra boundary/so3-type", boundary_tetra(), sl2_type(), vec![1, 0, 1, 1, 0, 1]),
        ("point/abelian", point(), LieAlgebra::abelian(1), vec![1, 1]),
    ]
}

#[test]
fn criterion_1_betti_reproduction() {
    criterion(1, "Betti numbers of the reference pairs", || {
        for (name, k, g, expected) in reference_cases() {
            let mut oracle = kunneth_oracle(&k, &g);
            oracle.resize(expected.len(), 0); // oracle trims trailing zeros
            assert_eq!(oracle, expected, "oracle disagrees for {name}");
            let parent = AlgebroidComplex::new(k, g).unwrap();
            let p_max = expected.len() - 1;
            let table = betti(&parent, p_max, p_max as u32 + 2);
            assert_eq!(table.betti, expected, "betti disagrees for {name}");
            assert!(table.stabilized, "truncation not stabilized for {name}");
        }
    });
}

#[test]
fn criterion_2_ce_oracles() {
    criterion(2, "Chevalley-Eilenberg cohomology oracles", || {
        assert_eq!(sl2_type().ce_cohomology(), vec![1, 0, 0, 1]);
        assert_eq!(aff1().ce_cohomology(), vec![1, 1, 0]);
    });
}

#[test]
fn criterion_3_local_differential_laws() {
    criterion(3, "local D^2 = 0 and Leibniz on random forms", || {
        let mut rng = StdRng::seed_from_u64(0x3001);
        for _ in 0..200 {
            let k = random_complex(&mut rng, 8);
            let g = random_algebra(&mut rng);
            let s = random_simplex(&mut rng, &k);
            let degree = rng.gen_range(0..=2);
            let omega = random_local_form(&mut rng, &s, g.dim(), degree, 3);
            assert!(omega.differential(&g).differential(&g).is_zero());
        }
        for _ in 0..100 {
            let k = random_complex(&mut rng, 8);
            let g = random_algebra(&mut rng);
            let s = random_simplex(&mut rng, &k);
            let (p, q) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let a = random_local_form(&mut rng, &s, g.dim(), p, 2);
            let b = random_local_form(&mut rng, &s, g.dim(), q, 2);
            let lhs = a.wedge(&b).unwrap().differential(&g);
            let mut rhs = a.differential(&g).wedge(&b).unwrap();
            let cross = a.wedge(&b.differential(&g)).unwrap();
            rhs = if p % 2 == 0 {
                rhs.add(&cross).unwrap()
            } else {
                rhs.sub(&cross).unwrap()
            };
            assert_eq!(lhs, rhs, "Leibniz fails on {s} at degrees ({p},{q})");
        }
    });
}

/// A random nonempty face of a simplex.
fn random_face(rng: &mut StdRng, s: &Simplex) -> Simplex {
    let verts: Vec<VertexId> = s
        .vertices()
        .iter()
        .filter(|_| rng.gen_bool(0.6))
        .cloned()
        .collect();
    if verts.is_empty() {
        return Simplex::new(vec![s.vertices()[0].clone()]).unwrap();
    }
    Simplex::new(verts).unwrap()
}

#[test]
fn criterion_4_restriction_laws() {
    criterion(4, "presheaf laws on subcomplex and star chains", || {
        let mut rng = StdRng::seed_from_u64(0x4001);
        for _ in 0..50 {
            let k = random_complex(&mut rng, 8);
            let g = random_algebra(&mut rng);
            let parent = AlgebroidComplex::new(k.clone(), g.clone()).unwrap();
            let l = random_subcomplex(&mut rng, &k);
            let t = random_subcomplex(&mut rng, &l);
            let degree = rng.gen_range(0..=2);
            let omega = random_valid_form(&mut rng, &parent, degree);
            // identity
            assert_eq!(omega.restrict_to_subcomplex(&k).unwrap(), omega);
            // composition
            let via = omega
                .restrict_to_subcomplex(&l)
                .unwrap()
                .restrict_to_subcomplex(&t)
                .unwrap();
            assert_eq!(via, omega.restrict_to_subcomplex(&t).unwrap());
            // restriction is a morphism for D and wedge
            assert_eq!(
                omega.differential(&g).restrict_to_subcomplex(&l).unwrap(),
                omega.restrict_to_subcomplex(&l).unwrap().differential(&g)
            );
            let q = rng.gen_range(0..=1);
            let eta = random_valid_form(&mut rng, &parent, q);
            assert_eq!(
                omega.wedge(&eta).unwrap().restrict_to_subcomplex(&l).unwrap(),
                omega
                    .restrict_to_subcomplex(&l)
                    .unwrap()
                    .wedge(&eta.restrict_to_subcomplex(&l).unwrap())
                    .unwrap()
            );
        }
        for _ in 0..50 {
            let k = random_complex(&mut rng, 8);
            let g = random_algebra(&mut rng);
            let parent = AlgebroidComplex::new(k.clone(), g.clone()).unwrap();
            let s = random_simplex(&mut rng, &k);
            let f1 = random_face(&mut rng, &s);
            let f0 = random_face(&mut rng, &f1);
            let (u, v, w) = (
                StarOpen::new(f0),
                StarOpen::new(f1),
                StarOpen::new(s),
            );
            let degree = rng.gen_range(0..=2);
            let global = random_valid_form(&mut rng, &parent, degree);
            let omega = section_over(&global, &u).unwrap();
            check_presheaf_laws(&parent, (&u, &v, &w), &omega).unwrap();
        }
    });
}

#[test]
fn criterion_5_extension_round_trips() {
    criterion(5, "extension from subcomplexes restricts back", || {
        let mut rng = StdRng::seed_from_u64(0x5001);
        for _ in 0..50 {
            let k = random_complex(&mut rng, 6);
            let g = random_algebra(&mut rng);
            let parent = AlgebroidComplex::new(k.clone(), g.clone()).unwrap();
            let l = random_subcomplex(&mut rng, &k);
            let sub = AlgebroidComplex::new(l.clone(), g.clone()).unwrap();
            let degree = rng.gen_range(0..=2);
            let omega_l = random_valid_form(&mut rng, &sub, degree);
            let extended = extend_from_subcomplex(&parent, &omega_l).unwrap();
            extended.validate().unwrap();
            assert_eq!(extended.restrict_to_subcomplex(&l).unwrap(), omega_l);
        }
    });
}

fn vertex_star_cover(k: &SimplicialComplex) -> Cover {
    Cover::new(
        k.vertices()
            .into_iter()
            .map(|v| StarOpen::new(Simplex::new(vec![v]).unwrap()))
            .collect(),
    )
}

#[test]
fn criterion_6_gluing() {
    criterion(6, "gluing round trips and incompatibility witnesses", || {
        let mut rng = StdRng::seed_from_u64(0x6001);
        let bases = [s1(), t2(), boundary_tetra()];
        for i in 0..25 {
            let k = bases[i % bases.len()].clone();
            let g = random_algebra(&mut rng);
            let parent = AlgebroidComplex::new(k.clone(), g).unwrap();
            let degree = rng.gen_range(0..=2);
            let omega = random_valid_form(&mut rng, &parent, degree);
            let cover = vertex_star_cover(&k);
            let sections = SectionFamily::new(
                cover
                    .members()
                    .iter()
                    .map(|m| (m.clone(), section_over(&omega, m).unwrap()))
                    .collect::<BTreeMap<_, _>>(),
            );
            let glued = check_gluing(&parent, &cover, &sections).unwrap();
            assert_eq!(glued, omega);
        }
        // corrupted overlap: sections of two different global forms
        let k = s1();
        let parent = AlgebroidComplex::new(k.clone(), LieAlgebra::trivial()).unwrap();
        let cover = vertex_star_cover(&k);
        let omega = hat(&k, &VertexId::new("v1")).unwrap();
        let wrong = constant(&k, rat(1));
        let mut assignments: BTreeMap<StarOpen, _> = cover
            .members()
            .iter()
            .map(|m| (m.clone(), section_over(&omega, m).unwrap()))
            .collect();
        let bad_member = StarOpen::new(sx(&["v0"]));
        assignments.insert(bad_member.clone(), section_over(&wrong, &bad_member).unwrap());
        let err = check_gluing(&parent, &cover, &SectionFamily::new(assignments)).unwrap_err();
        match err {
            Error::GluingIncompatible {
                left,
                right,
                simplex,
                difference,
            } => {
                assert!(left == sx(&["v0"]) || right == sx(&["v0"]), "wrong pair reported");
                let other = if left == sx(&["v0"]) { &right } else { &left };
                let overlap = closed_star_subcomplex(
                    &k,
                    &StarOpen::new(sx(&["v0"]).union(other)),
                )
                .unwrap();
                assert!(overlap.contains(&simplex), "witness {simplex} off the overlap");
                assert!(!difference.is_empty());
            }
            other => panic!("expected a gluing witness, got {other}"),
        }
    });
}

#[test]
fn criterion_7_fineness() {
    criterion(7, "partitions of unity and fineness operators", || {
        let mut rng = StdRng::seed_from_u64(0x7001);
        let configs: Vec<(SimplicialComplex, Simplex)> = vec![
            (s1(), sx(&["v0", "v1"])),
            (t2(), sx(&["v0", "v2"])),
            (boundary_tetra(), sx(&["v1", "v3"])),
        ];
        let mut partitions = Vec::new();
        for (k, extra) in &configs {
            let plain = vertex_star_cover(k);
            let mut redundant_members = plain.members().to_vec();
            redundant_members.push(StarOpen::new(extra.clone()));
            let redundant = Cover::new(redundant_members);
            for cover in [plain, redundant] {
                let part = partition_of_unity(k, &cover).unwrap();
                certify_partition(k, &part).unwrap();
                partitions.push((k.clone(), part));
            }
        }
        for i in 0..20 {
            let (k, part) = &partitions[i % partitions.len()];
            let g = random_algebra(&mut rng);
            let parent = AlgebroidComplex::new(k.clone(), g).unwrap();
            let degree = rng.gen_range(0..=2);
            let omega = random_valid_form(&mut rng, &parent, degree);
            let pieces = fineness_operators(part, &omega).unwrap();
            let mut total = pieces[0].clone();
            for piece in &pieces[1..] {
                total = total.add(piece).unwrap();
            }
            let expected = RationalPiecewiseForm::from_polynomial(omega);
            assert!(total.equals(&expected).unwrap(), "Σ h_j(ω) ≠ ω");
        }
    });
}

#[test]
fn criterion_8_elimination_self_check() {
    criterion(8, "pivot strategies agree on every rank", || {
        for (name, k, g, expected) in reference_cases() {
            let parent = AlgebroidComplex::new(k, g).unwrap();
            let p_max = expected.len() - 1;
            let w = p_max as u32 + 2;
            for p in 0..=p_max {
                let markowitz = differential_rank(&parent, p, w, PivotStrategy::Markowitz);
                let ordered = differential_rank(&parent, p, w, PivotStrategy::ColumnOrder);
                assert_eq!(
                    markowitz, ordered,
                    "strategies disagree for {name} at degree {p}"
                );
            }
        }
    });
}
