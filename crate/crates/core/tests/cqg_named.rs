use std::collections::BTreeSet;

use cqgalg::cqg::*;
use cqgalg::freestar::{antipode_kac, counit, Gen, NCPoly};
use cqgalg::ideal::{membership, membership_escalating, CertificateSpan, RelationSet};
use cqgalg::{Scalar, ScalarMatrix, Substitution};

fn u(i: usize, j: usize) -> NCPoly {
    NCPoly::gen(Gen::u(i, j))
}

fn monic_set(r: &RelationSet) -> BTreeSet<NCPoly> {
    r.iter().map(|p| p.monic()).collect()
}

fn identity_subst() -> Substitution {
    Substitution::new(Vec::new()).unwrap()
}

#[test]
fn au1_is_the_circle() {
    let p = make_au(1, &ScalarMatrix::identity(1)).unwrap();
    let uu = u(1, 1);
    let expect: BTreeSet<NCPoly> = [
        uu.mul(&uu.star()).sub(&NCPoly::one()),
        uu.star().mul(&uu).sub(&NCPoly::one()),
    ]
    .into_iter()
    .map(|p| p.monic())
    .collect();
    assert_eq!(monic_set(p.relations()), expect);
    assert!(p.tags().kac);
}

#[test]
fn au2_relation_count_and_kac_tag() {
    let p = make_au(2, &ScalarMatrix::identity(2)).unwrap();
    assert!(p.relations().len() <= 16);
    assert!(p.tags().kac);
    let q = Scalar::q();
    let r = ScalarMatrix::diag(&[Scalar::one(), &q * &q]);
    assert!(!make_au(2, &r).unwrap().tags().kac);
}

#[test]
fn twisted_coefficients_follow_powers_of_q() {
    // R ū R⁻¹ has (i,j) entry q^{2(i-j)} u_ij°, so (uᵗ R ū R⁻¹)_{11} has
    // the term q^{2(2-1)} u_21 u_21°
    let q = Scalar::q();
    let r = ScalarMatrix::diag(&[Scalar::one(), q.pow(2)]);
    let p = make_au(2, &r).unwrap();
    let target = u(1, 1)
        .mul(&u(1, 1).star())
        .add(&u(2, 1).mul(&u(2, 1).star()).scale(&q.pow(2)))
        .sub(&NCPoly::one());
    assert!(p.relations().iter().any(|x| x.monic() == target.monic()));
}

#[test]
fn singular_twist_is_rejected() {
    let z = ScalarMatrix::from_ints(&[&[1, 1], &[1, 1]]);
    assert!(matches!(make_au(2, &z), Err(cqgalg::Error::Singular(_))));
    assert!(matches!(make_ao(2, &z), Err(cqgalg::Error::Singular(_))));
}

#[test]
fn ao2_has_self_adjoint_entries() {
    let p = make_ao(2, &ScalarMatrix::identity(2)).unwrap();
    for i in 1..=2 {
        for j in 1..=2 {
            let r = u(i, j).star().sub(&u(i, j));
            assert!(p.relations().iter().any(|x| x.monic() == r.monic()));
        }
    }
}

#[test]
fn asp1_block_shape_after_elimination() {
    let p = make_asp(1).unwrap();
    assert_eq!(p.name(), "A_sp(1)");
    let (e, _) = p.eliminated().unwrap();
    let m = &e.blocks()[0].matrix;
    // (a, b; -b°, a°) with a = u11, b = u12; writing c = -b° gives (a, -c°; c, a°)
    assert_eq!(m.get(0, 0), u(1, 1));
    assert_eq!(m.get(0, 1), u(1, 2));
    assert_eq!(m.get(1, 0), u(1, 2).star().neg());
    assert_eq!(m.get(1, 1), u(1, 1).star());
    assert_eq!(make_asp(2).unwrap().generators().len(), 16);
}

#[test]
fn austar_counts() {
    let p1 = make_austar(1).unwrap();
    let au1 = make_au(1, &ScalarMatrix::identity(1)).unwrap();
    assert_eq!(monic_set(p1.relations()), monic_set(au1.relations()));
    let p2 = make_austar(2).unwrap();
    let au2 = make_au(2, &ScalarMatrix::identity(2)).unwrap();
    // biunitarity plus the nonzero distinct triples, closed under star
    assert!(p2.relations().len() > au2.relations().len());
    assert!(p2.relations().len() <= 16 + 64);
}

#[test]
fn as2_relation_count() {
    // 12 defining polynomials; the adjoints of u² - u and of the four sums
    // are new, those of u° - u are not
    let p = make_as(2).unwrap();
    assert_eq!(p.relations().len(), 20);
    let (e, _) = make_as(1).unwrap().eliminated().unwrap();
    assert!(e.relations().is_empty());
    assert_eq!(e.blocks()[0].matrix.get(0, 0), NCPoly::one());
}

#[test]
fn suq2_relations_match_the_displayed_list() {
    let p = make_suq(2).unwrap();
    let q = Scalar::q();
    let has = |r: NCPoly| p.relations().iter().any(|x| x.monic() == r.monic());
    assert!(has(u(1, 1).mul(&u(2, 1)).sub(&u(2, 1).mul(&u(1, 1)).scale(&q))));
    assert!(has(u(1, 1)
        .mul(&u(2, 2))
        .sub(&u(2, 2).mul(&u(1, 1)))
        .sub(&u(1, 2).mul(&u(2, 1)).scale(&(&q - &q.inv())))));
    assert!(has(u(1, 1).mul(&u(2, 2)).sub(&u(1, 2).mul(&u(2, 1)).scale(&q)).sub(&NCPoly::one())));
    assert!(has(u(1, 1).star().sub(&u(2, 2))));
    assert!(has(u(1, 2).star().add(&u(2, 1).scale(&q))));
    assert!(has(u(2, 1).star().add(&u(1, 2).scale(&q.inv()))));
    assert!(has(u(2, 2).star().sub(&u(1, 1))));
    assert!(matches!(make_suq(5), Err(cqgalg::Error::UnsupportedSize(5))));
}

#[test]
fn suq2_satisfies_the_orthogonality_relations() {
    let p = make_suq(2).unwrap();
    let q = Scalar::q();
    let mut targets = Vec::new();
    for a in 1..=2 {
        for b in 1..=2 {
            let d = if a == b { NCPoly::one() } else { NCPoly::zero() };
            let mut r1 = d.neg();
            let mut r2 = d.neg();
            let mut r3 = d.neg();
            let mut r4 = d.neg();
            for i in 1..=2usize {
                r1.add_assign(&u(a, i).mul(&u(b, i).star()));
                r2.add_assign(&u(i, a).star().mul(&u(i, b)));
                r3.add_assign(&u(i, a).mul(&u(i, b).star()).scale(&q.pow(2 * (i as i32 - b as i32))));
                r4.add_assign(&u(a, i).star().mul(&u(b, i)).scale(&q.pow(2 * (a as i32 - i as i32))));
            }
            targets.extend([r1, r2, r3, r4]);
        }
    }
    for t in targets {
        let m = membership(&t, p.relations(), CertificateSpan::depth(1)).unwrap();
        assert!(m.is_member(), "{} not derived", t);
    }
}

#[test]
fn counit_annihilates_every_constructor() {
    let list = vec![
        make_au(2, &ScalarMatrix::identity(2)).unwrap(),
        make_ao(2, &ScalarMatrix::sigma2()).unwrap(),
        make_austar(2).unwrap(),
        make_as(3).unwrap(),
        make_suq(3).unwrap(),
        make_aaut(2).unwrap(),
    ];
    for p in list {
        for r in p.relations().iter() {
            assert!(counit(r).is_zero(), "{}: {}", p.name(), r);
        }
        assert!(p.relations().is_star_closed());
    }
}

#[test]
fn coproduct_respects_relations_at_small_size() {
    let list = vec![
        make_au(2, &ScalarMatrix::identity(2)).unwrap(),
        make_ao(2, &ScalarMatrix::identity(2)).unwrap(),
        make_as(2).unwrap(),
        make_suq(2).unwrap(),
    ];
    for p in list {
        let verdicts = p.corepresentation_check(CertificateSpan::depth(1)).unwrap();
        assert!(verdicts.iter().all(|v| v.is_member()), "{}", p.name());
    }
}

#[test]
fn kac_antipode_preserves_the_ideal() {
    for p in [
        make_au(2, &ScalarMatrix::identity(2)).unwrap(),
        make_ao(2, &ScalarMatrix::identity(2)).unwrap(),
        make_as(2).unwrap(),
    ] {
        for r in p.relations().iter() {
            let s = antipode_kac(r, &p).unwrap();
            let (m, _) = membership_escalating(&s, p.relations(), 2).unwrap();
            assert!(m.is_member(), "{}: S({}) = {}", p.name(), r, s);
        }
    }
    let suq = make_suq(2).unwrap();
    assert!(antipode_kac(suq.relations().get(0), &suq).is_err());
}

#[test]
fn identity_hom_check_passes_at_depth_zero() {
    let p = make_ao(2, &ScalarMatrix::identity(2)).unwrap();
    let rep = hom_check(&p, &p, &identity_subst(), 0).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.depth(), 0);
}

#[test]
fn inconsistent_substitution_is_rejected() {
    let g = Gen::u(1, 1);
    let r = Substitution::new(vec![(g, u(1, 2)), (g.star(), u(2, 1))]);
    assert!(matches!(r, Err(cqgalg::Error::InconsistentSubstitution(_))));
}

#[test]
fn state_invariance_reproduces_the_twisted_relations() {
    let q = Scalar::q();
    for r in [ScalarMatrix::identity(2), ScalarMatrix::diag(&[Scalar::one(), q.pow(2)])] {
        let derived = derive_from_state_invariance(2, &r).unwrap();
        let au = make_au(2, &r.transpose()).unwrap();
        assert_eq!(monic_set(&derived), monic_set(au.relations()));
    }
    let one = derive_from_state_invariance(1, &ScalarMatrix::identity(1)).unwrap();
    let v = u(1, 1);
    assert!(one.iter().any(|x| x.monic() == v.mul(&v.star()).sub(&NCPoly::one()).monic()));
}

#[test]
fn state_invariance_for_a_non_diagonal_state() {
    let r = ScalarMatrix::from_rows(vec![
        vec![Scalar::from_int(2), Scalar::i()],
        vec![Scalar::i().neg(), Scalar::from_int(1)],
    ])
    .unwrap();
    let derived = derive_from_state_invariance(2, &r).unwrap();
    let au = make_au(2, &r.transpose()).unwrap();
    let dp = CQGPresentation::new(
        "derived",
        au.blocks().to_vec(),
        derived,
        Tags::default(),
    )
    .unwrap();
    assert!(hom_check(&au, &dp, &identity_subst(), 1).unwrap().passed());
    assert!(hom_check(&dp, &au, &identity_subst(), 1).unwrap().passed());
}

#[test]
fn bilinear_forms_give_inverse_twists() {
    let cases = vec![
        ScalarMatrix::identity(2),
        ScalarMatrix::diag(&[Scalar::one(), Scalar::from_int(2)]),
        ScalarMatrix::from_ints(&[&[1, 2], &[0, 1]]),
    ];
    for b in cases {
        let rels = derive_from_bilinear(&b).unwrap();
        let au = make_au(2, &b.inverse().unwrap()).unwrap();
        let dp = CQGPresentation::new("bilinear", au.blocks().to_vec(), rels, Tags::default())
            .unwrap();
        assert!(hom_check(&au, &dp, &identity_subst(), 1).unwrap().passed(), "{}", b);
        assert!(hom_check(&dp, &au, &identity_subst(), 1).unwrap().passed(), "{}", b);
    }
}
