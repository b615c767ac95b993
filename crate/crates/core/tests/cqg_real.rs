mod common;

use cqgalg::cqg::*;
use cqgalg::fdalg::{RealCStarSpec, StateSpec};
use cqgalg::freestar::{Gen, NCPoly};
use cqgalg::ideal::{membership_escalating, CertificateSpan, RelationSet};
use cqgalg::{Scalar, ScalarMatrix, Substitution};
use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn u(i: usize, j: usize) -> NCPoly {
    NCPoly::gen(Gen::u(i, j))
}

fn spec(s: &str) -> RealCStarSpec {
    s.parse().unwrap()
}

fn id() -> Substitution {
    Substitution::new(Vec::new()).unwrap()
}

/// Sends each generator of `from` to the fundamental entry of `to` at the
/// same block and position, which accounts for eliminated generators.
fn rename_onto(from: &CQGPresentation, to: &CQGPresentation) -> Substitution {
    Substitution::new(from.generators().into_iter().filter_map(|g| {
        let blk = to.blocks().iter().find(|b| b.label == g.block())?;
        Some((g, blk.matrix.get(g.row() - 1, g.col() - 1)))
    }))
    .unwrap()
}

fn mutual(a: &CQGPresentation, b: &CQGPresentation, k: usize) -> bool {
    hom_check(a, b, &rename_onto(a, b), k).unwrap().passed()
        && hom_check(b, a, &rename_onto(b, a), k).unwrap().passed()
}

#[test]
fn complex_quantum_unitary_group_is_a_free_product() {
    let sizes = [2, 3];
    let r = StateSpec::new(vec![ScalarMatrix::identity(2), ScalarMatrix::identity(3)]).unwrap();
    let p = quantum_unitary_complex(&sizes, &r).unwrap();
    assert_eq!(p.blocks().len(), 2);
    assert_eq!(p.matrix_entries(), 13);
    let labels: Vec<usize> = p.blocks().iter().map(|b| b.label).collect();
    assert_eq!(labels, vec![1, 2]);

    let r11 = StateSpec::new(vec![ScalarMatrix::identity(1), ScalarMatrix::identity(1)]).unwrap();
    let p = quantum_unitary_complex(&[1, 1], &r11).unwrap();
    assert_eq!(p.generators().len(), 2);
    assert_eq!(p.relations().len(), 4);

    let bad = StateSpec::new(vec![ScalarMatrix::identity(2)]).unwrap();
    assert!(matches!(
        quantum_unitary_complex(&[2, 3], &bad),
        Err(cqgalg::Error::BlockMismatch(_))
    ));
}

#[test]
fn single_block_is_au_with_transposed_state() {
    let r = ScalarMatrix::from_rows(vec![
        vec![Scalar::from_int(2), Scalar::i()],
        vec![Scalar::i().neg(), Scalar::one()],
    ])
    .unwrap();
    let p = quantum_unitary_complex(&[2], &StateSpec::new(vec![r.clone()]).unwrap()).unwrap();
    let au = make_au(2, &r.transpose()).unwrap();
    assert_eq!(p.relations(), au.relations());
}

#[test]
fn free_product_counts_and_counit() {
    let cu1 = make_au(1, &ScalarMatrix::identity(1)).unwrap();
    let csu2 = abelianize(&make_asp(1).unwrap()).unwrap();
    let au3 = make_au(3, &ScalarMatrix::identity(3)).unwrap();
    let p = free_product(&[cu1.clone(), csu2, au3]).unwrap();
    assert_eq!(p.matrix_entries(), 1 + 4 + 9);
    assert!(p.tags().kac);
    for r in p.relations().iter() {
        assert!(cqgalg::freestar::counit(r).is_zero());
    }
    let single = free_product(std::slice::from_ref(&cu1)).unwrap();
    assert_eq!(single.relations().len(), cu1.relations().len());
    assert!(single.generators().iter().all(|g| g.block() == 1));
}

#[test]
fn real_matrices_give_the_orthogonal_group() {
    let p = quantum_unitary_real(&spec("R(2)"), &[ScalarMatrix::identity(2)]).unwrap();
    assert!(p.generators().iter().all(|g| g.is_self_adjoint()));
    let ao = make_ao(2, &ScalarMatrix::identity(2)).unwrap();
    assert!(mutual(&p, &ao, 1));
    assert!(p.tags().kac);
}

fn powers_twist() -> Vec<ScalarMatrix> {
    // R^{-1/2} up to a positive scalar, which the relations do not see
    vec![ScalarMatrix::diag(&[Scalar::s(), Scalar::s().inv()])]
}

#[test]
fn quaternions_give_suq2() {
    let p = quantum_unitary_real(&spec("H(1)"), &powers_twist()).unwrap();
    let q = Scalar::q();
    let m = &p.blocks()[0].matrix;
    // (a, -q c°; c, a°) with a = u11 and c = -q⁻¹ u12°
    assert_eq!(m.get(0, 0), u(1, 1));
    assert_eq!(m.get(0, 1), u(1, 2));
    assert_eq!(m.get(1, 0), u(1, 2).star().scale(&q.inv().neg()));
    assert_eq!(m.get(1, 1), u(1, 1).star());
    assert_eq!(p.generators().len(), 2);
    let r = real_state(&spec("H(1)"), &powers_twist()).unwrap();
    assert_eq!(r.blocks[0], ScalarMatrix::diag(&[q.inv(), q.clone()]));

    let suq = make_suq(2).unwrap();
    let to_p = Substitution::new(vec![
        (Gen::u(1, 1), u(1, 1)),
        (Gen::u(1, 2), u(1, 2)),
        (Gen::u(2, 1), u(1, 2).star().scale(&q.inv().neg())),
        (Gen::u(2, 2), u(1, 1).star()),
    ])
    .unwrap();
    assert!(hom_check(&suq, &p, &to_p, 2).unwrap().passed());
    assert!(hom_check(&p, &suq, &id(), 2).unwrap().passed());
}

#[test]
fn suq2_sits_in_the_twisted_free_unitary_group() {
    let q = Scalar::q();
    let au = make_au(2, &ScalarMatrix::diag(&[Scalar::one(), q.pow(2)])).unwrap();
    let suq = make_suq(2).unwrap();
    assert!(hom_check(&au, &suq, &id(), 1).unwrap().passed());
}

#[test]
fn complex_matrices_with_a_commuting_twist() {
    // F = K ⊕ H K̄⁻¹ with K = 1, H = diag(1, 2)
    let h = ScalarMatrix::diag(&[Scalar::one(), Scalar::from_int(2)]);
    let p = quantum_unitary_real(&spec("C(2)"), &[ScalarMatrix::identity(2), h.clone()]).unwrap();
    assert!(p.generators().iter().all(|g| g.block() == 1));
    let um = cqgalg::GenMatrix::generic(2, 1);
    let hm = cqgalg::GenMatrix::from_scalar(&h);
    let comm = cqgalg::matrep::relations_from_eq(&um.mul(&hm).unwrap(), &hm.mul(&um).unwrap())
        .unwrap();
    let au = make_au(2, &ScalarMatrix::identity(2)).unwrap();
    let au = free_product(&[au]).unwrap();
    let expected = au.quotient(&RelationSet::new(comm)).unwrap();
    for (a, b) in [(&p, &expected), (&expected, &p)] {
        let rep = hom_check(a, b, &rename_onto(a, b), 2).unwrap();
        let bad: Vec<String> = rep.failing().map(|c| c.label.clone()).collect();
        assert!(bad.is_empty(), "{} -> {}: {:?}\n{}", a.name(), b.name(), bad, a);
    }
}

#[test]
fn woronowicz_ideals() {
    let au2 = make_au(2, &ScalarMatrix::identity(2)).unwrap();
    let ab = abelianize(&au2).unwrap();
    let comms = RelationSet::new(
        ab.relations().iter().filter(|r| !au2.relations().iter().any(|x| x == *r)).cloned(),
    );
    assert!(woronowicz_check(&au2, &comms, CertificateSpan::depth(1)).unwrap().passed());

    let (qc, extra) = real_form_ideal(&spec("R(1)"), &[ScalarMatrix::identity(1)]).unwrap();
    let r = woronowicz_check(&qc, &extra, CertificateSpan::depth(1)).unwrap();
    assert!(r.passed());

    let (qc, extra) = real_form_ideal(&spec("H(1)"), &[ScalarMatrix::identity(2)]).unwrap();
    assert!(woronowicz_check(&qc, &extra, CertificateSpan::depth(2)).unwrap().passed());
}

#[test]
fn abelianize_the_circle_adds_one_commutator() {
    let p = make_au(1, &ScalarMatrix::identity(1)).unwrap();
    let ab = abelianize(&p).unwrap();
    let c = u(1, 1).mul(&u(1, 1).star()).sub(&u(1, 1).star().mul(&u(1, 1)));
    let added: Vec<&NCPoly> =
        ab.relations().iter().filter(|r| !p.relations().iter().any(|x| x == *r)).collect();
    assert!(added.iter().all(|r| r.monic() == c.monic()));
    assert!(!added.is_empty());
    assert!(ab.tags().commutative_claimed);
}

#[test]
fn abelianized_austar_matches_abelianized_au() {
    let a = abelianize(&make_austar(2).unwrap()).unwrap();
    let b = abelianize(&make_au(2, &ScalarMatrix::identity(2)).unwrap()).unwrap();
    assert!(mutual(&a, &b, 1));
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn abelianized_ao2_samples_are_orthogonal() {
    let ab = abelianize(&make_ao(2, &ScalarMatrix::identity(2)).unwrap()).unwrap();
    let pts = sample_points(&ab, 100, 7);
    assert_eq!(pts.len(), 100);
    for pt in &pts {
        let m = &blocks_at(&ab, pt)[0];
        assert!(m.iter().all(|z| z.im.abs() < 1e-9));
        let gram = m.transpose() * m;
        assert!((gram - DMatrix::identity(2, 2)).norm() < 1e-9);
    }
}

#[test]
fn abelianized_asp1_samples_are_special_unitary() {
    let ab = abelianize(&make_asp(1).unwrap()).unwrap();
    let pts = sample_points(&ab, 100, 11);
    assert_eq!(pts.len(), 100);
    for pt in &pts {
        let m = &blocks_at(&ab, pt)[0];
        assert!((m.adjoint() * m - DMatrix::identity(2, 2)).norm() < 1e-9);
        assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn projective_versions() {
    let au2 = make_au(2, &ScalarMatrix::identity(2)).unwrap();
    assert_eq!(projective(&au2).generators.len(), 16);
    let au1 = make_au(1, &ScalarMatrix::identity(1)).unwrap();
    let pv = projective(&au1);
    assert_eq!(pv.generators.len(), 1);
    assert_eq!(pv.scalar_generators(1).unwrap(), vec![true]);
}

#[test]
fn trace_preservation() {
    let s = spec("R(2)");
    let f = vec![ScalarMatrix::identity(2)];
    let p = quantum_unitary_real(&s, &f).unwrap();
    let r = real_state(&s, &f).unwrap();
    assert!(trace_preservation_check(&p, &r, 2).unwrap().passed());

    let s = spec("H(1)");
    let p = quantum_unitary_real(&s, &powers_twist()).unwrap();
    let r = real_state(&s, &powers_twist()).unwrap();
    assert!(trace_preservation_check(&p, &r, 2).unwrap().passed());
}

#[test]
fn diagonal_twist_with_real_entries_kills_off_diagonal() {
    let r = ScalarMatrix::diag(&[Scalar::one(), Scalar::from_int(2)]);
    let au = make_au(2, &r).unwrap();
    let sa: Vec<NCPoly> =
        (1..=2).flat_map(|i| (1..=2).map(move |j| u(i, j).star().sub(&u(i, j)))).collect();
    // self-adjoint entries, as generators rather than as relations
    let (p, elim) = au.quotient(&RelationSet::new(sa)).unwrap().eliminated().unwrap();
    let (m, k) = membership_escalating(&elim.image(Gen::u(1, 2)), p.relations(), 1).unwrap();
    assert!(m.is_member());
    assert!(k <= 1);
}

#[test]
fn aaut_maps_into_ao2() {
    let aut = make_aaut(2).unwrap();
    let ao = make_ao(2, &ScalarMatrix::identity(2)).unwrap();
    let mut map = Vec::new();
    for k in 1..=2 {
        for l in 1..=2 {
            for i in 1..=2 {
                for j in 1..=2 {
                    map.push((Gen::aut(0, k, l, 0, i, j), u(k, i).mul(&u(l, j).star())));
                }
            }
        }
    }
    let rep = hom_check(&aut, &ao, &Substitution::new(map).unwrap(), 2).unwrap();
    assert!(rep.passed(), "{:?}", rep.failing().map(|c| c.label.clone()).collect::<Vec<_>>());
}

#[test]
fn real_points_are_the_quantum_permutation_group() {
    let p = make_aaut_real(&spec("R(1) + R(1)")).unwrap();
    let s2 = make_as(2).unwrap();
    let to_s = Substitution::new((1..=2).flat_map(|x| {
        (1..=2).map(move |y| (Gen::aut(x, 1, 1, y, 1, 1), u(y, x)))
    }))
    .unwrap();
    let to_a = Substitution::new((1..=2).flat_map(|x| {
        (1..=2).map(move |y| (Gen::u(y, x), NCPoly::gen(Gen::aut(x, 1, 1, y, 1, 1))))
    }))
    .unwrap();
    let raw = make_aaut_real_unreduced(&spec("R(1) + R(1)")).unwrap();
    assert!(hom_check(&raw, &s2, &to_s, 2).unwrap().passed());
    assert!(hom_check(&s2, &raw, &to_a, 2).unwrap().passed());
    assert!(check_commutative(&p, CertificateSpan::depth(1)).unwrap().report.all_commute());
}

#[test]
fn aaut_real_matrices_are_commutative() {
    let p = make_aaut_real(&spec("R(2)")).unwrap();
    let c = check_commutative(&p, CertificateSpan::depth(1)).unwrap();
    assert!(c.report.all_commute(), "{:?}", c.report.failing);
}

#[test]
fn aaut_quaternions_are_commutative() {
    let p = make_aaut_real(&spec("H(1)")).unwrap();
    let c = check_commutative(&p, CertificateSpan::depth(1)).unwrap();
    assert!(c.report.all_commute(), "{:?}", c.report.failing);
}

#[test]
fn quaternion_sigma_relations_have_tilde_form() {
    // a^{k̃l̃}_{r̃s̃} = (-1)^{r+s+k+l} a^{lk}_{sr} with m̃ = m + (-1)^{m+1}
    let p = make_aaut_real_unreduced(&spec("H(1)")).unwrap();
    let t = |m: usize| if m == 1 { 2 } else { 1 };
    for k in 1..=2 {
        for l in 1..=2 {
            for r in 1..=2 {
                for s in 1..=2 {
                    let lhs = NCPoly::gen(Gen::aut(0, t(k), t(l), 0, t(r), t(s)));
                    let sign = if (r + s + k + l) % 2 == 0 { 1 } else { -1 };
                    let rhs = NCPoly::gen(Gen::aut(0, l, k, 0, s, r)).scale(&Scalar::from_int(sign));
                    let target = lhs.sub(&rhs);
                    let m = membership_escalating(&target, p.relations(), 0).unwrap().0;
                    assert!(m.is_member(), "{}", target);
                }
            }
        }
    }
}

/// `a_{qp}` at a classical automorphism given by its complexified matrix on
/// the basis of matrix units.
fn aut_point(units: &[(usize, usize, usize)], m: &DMatrix<Complex64>) -> Point {
    let mut pt = Point::new();
    for (qi, q) in units.iter().enumerate() {
        for (pi, p) in units.iter().enumerate() {
            pt.insert(Gen::aut(q.0, q.1, q.2, p.0, p.1, p.2), m[(qi, pi)]);
        }
    }
    pt
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    g.qr().q()
}

/// Matrix of a linear map on matrix units, given as `(b, i, j) ↦ (target
/// block, image of e^b_ij)`.
fn matrix_of(
    units: &[(usize, usize, usize)],
    sizes: &[usize],
    act: impl Fn(usize, usize, usize) -> (usize, DMatrix<Complex64>),
) -> DMatrix<Complex64> {
    let d = units.len();
    let mut out = DMatrix::zeros(d, d);
    let label = |b: usize| if sizes.len() == 1 { 0 } else { b + 1 };
    for (pi, p) in units.iter().enumerate() {
        let b = if p.0 == 0 { 0 } else { p.0 - 1 };
        let (tb, img) = act(b, p.1 - 1, p.2 - 1);
        for (qi, q) in units.iter().enumerate() {
            if q.0 == label(tb) {
                out[(qi, pi)] = img[(q.1 - 1, q.2 - 1)];
            }
        }
    }
    out
}

fn units_of(sizes: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (b, &n) in sizes.iter().enumerate() {
        let x = if sizes.len() == 1 { 0 } else { b + 1 };
        for i in 1..=n {
            for j in 1..=n {
                out.push((x, i, j));
            }
        }
    }
    out
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<Complex64> {
    let mut e = DMatrix::zeros(n, n);
    e[(i, j)] = c(1.0, 0.0);
    e
}

#[test]
fn unit_and_trace_axioms_hold_at_classical_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // M2(C): inner automorphisms and their composites with conjugation,
    // complexified on M2 ⊕ M2 where σ(x, y) = (ȳ, x̄)
    let raw = make_aaut_real_unreduced(&spec("C(2)")).unwrap();
    let sizes = [2, 2];
    let units = units_of(&sizes);
    for flip in [false, true] {
        for _ in 0..5 {
            let v = random_unitary(2, &mut rng);
            let vb = v.map(|z| z.conj());
            let m = matrix_of(&units, &sizes, |b, i, j| {
                let e = unit(2, i, j);
                let tb = if flip { 1 - b } else { b };
                let img = if tb == 0 { &v * e * v.adjoint() } else { &vb * e * vb.adjoint() };
                (tb, img)
            });
            let pt = aut_point(&units, &m);
            let res = max_residual(raw.relations().iter().cloned(), &pt);
            assert!(res < 1e-10, "flip={} residual {}", flip, res);
        }
    }
    // M2(R) with orthogonal conjugation, H(1) with SU(2) conjugation
    for (s, n) in [("R(2)", 2), ("H(1)", 2)] {
        let raw = make_aaut_real_unreduced(&spec(s)).unwrap();
        let units = units_of(&[n]);
        for _ in 0..5 {
            let mut v = random_unitary(n, &mut rng);
            if s == "R(2)" {
                let th: f64 = rng.gen_range(0.0..6.3);
                v = DMatrix::from_row_slice(2, 2, &[
                    c(th.cos(), 0.0), c(-th.sin(), 0.0), c(th.sin(), 0.0), c(th.cos(), 0.0),
                ]);
            } else {
                let (a, b) = (v[(0, 0)], v[(1, 0)]);
                let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                let (a, b) = (a / nrm, b / nrm);
                v = DMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()]);
            }
            let m = matrix_of(&units, &[n], |_, i, j| (0, &v * unit(n, i, j) * v.adjoint()));
            let res = max_residual(raw.relations().iter().cloned(), &aut_point(&units, &m));
            assert!(res < 1e-10, "{} residual {}", s, res);
        }
    }
}

#[test]
fn non_trace_preserving_maps_violate_the_relations() {
    // x ↦ g x g⁻¹ with g not unitary is multiplicative and unital but not a
    // *-map; the relations must notice
    let raw = make_aaut(2).unwrap();
    let units = units_of(&[2]);
    let g = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let gi = g.clone().try_inverse().unwrap();
    let m = matrix_of(&units, &[2], |_, i, j| (0, &g * unit(2, i, j) * &gi));
    assert!(max_residual(raw.relations().iter().cloned(), &aut_point(&units, &m)) > 1e-3);
}
