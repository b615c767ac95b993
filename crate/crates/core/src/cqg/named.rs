use itertools::Itertools;

use super::{free_product, Block, CQGPresentation, Tags};
use crate::error::{Error, Result};
use crate::fdalg::{ComplexifiedAlgebra, StateSpec};
use crate::freestar::{Gen, NCPoly};
use crate::ideal::RelationSet;
use crate::matrep::{relations_from_eq, GenMatrix};
use crate::scalars::{Scalar, ScalarMatrix};

fn u(i: usize, j: usize) -> NCPoly {
    NCPoly::gen(Gen::u(i, j))
}

fn check_square(m: &ScalarMatrix, n: usize, what: &str) -> Result<ScalarMatrix> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} is {}x{}, expected {}x{}",
            what,
            m.rows(),
            m.cols(),
            n,
            n
        )));
    }
    m.inverse().map_err(|_| Error::Singular(what.to_string()))
}

pub(crate) fn unitarity(u: &GenMatrix) -> Result<Vec<NCPoly>> {
    let id = GenMatrix::identity(u.rows());
    let mut rels = relations_from_eq(&u.mul(&u.adjoint())?, &id)?;
    rels.extend(relations_from_eq(&u.adjoint().mul(u)?, &id)?);
    Ok(rels)
}

/// `uu* = u*u = 1` and `u^t(RūR⁻¹) = (RūR⁻¹)u^t = 1`.
pub(super) fn au_relations(u: &GenMatrix, r: &ScalarMatrix) -> Result<Vec<NCPoly>> {
    let rinv = check_square(r, u.rows(), "R")?;
    let twisted = GenMatrix::from_scalar(r).mul(&u.bar())?.mul(&GenMatrix::from_scalar(&rinv))?;
    let id = GenMatrix::identity(u.rows());
    let mut rels = unitarity(u)?;
    rels.extend(relations_from_eq(&u.transpose().mul(&twisted)?, &id)?);
    rels.extend(relations_from_eq(&twisted.mul(&u.transpose())?, &id)?);
    Ok(rels)
}

fn single(name: String, n: usize, rels: Vec<NCPoly>, kac: bool) -> Result<CQGPresentation> {
    CQGPresentation::new(
        name,
        vec![Block { label: 0, matrix: GenMatrix::generic(n, 0) }],
        RelationSet::new(rels),
        Tags { kac, commutative_claimed: false },
    )
}

fn with_matrix(family: &str, n: usize, m: &ScalarMatrix) -> String {
    if *m == ScalarMatrix::identity(n) {
        format!("{}({})", family, n)
    } else {
        format!("{}({},{})", family, n, m)
    }
}

/// The universal unitary quantum group `A_u(n, R)`.
pub fn make_au(n: usize, r: &ScalarMatrix) -> Result<CQGPresentation> {
    if n == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let rels = au_relations(&GenMatrix::generic(n, 0), r)?;
    single(with_matrix("A_u", n, r), n, rels, r.is_scalar_multiple_of_identity())
}

/// The universal orthogonal quantum group `A_o(n, F)`: `A_u(n, F*F)` with
/// `u = F ū F⁻¹`.
pub fn make_ao(n: usize, f: &ScalarMatrix) -> Result<CQGPresentation> {
    if n == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let finv = check_square(f, n, "F")?;
    let q = f.adjoint().mul(f)?;
    let um = GenMatrix::generic(n, 0);
    let mut rels = au_relations(&um, &q)?;
    let twisted = GenMatrix::from_scalar(f).mul(&um.bar())?.mul(&GenMatrix::from_scalar(&finv))?;
    rels.extend(relations_from_eq(&um, &twisted)?);
    single(with_matrix("A_o", n, f), n, rels, q.is_scalar_multiple_of_identity())
}

/// `A_sp(m) = A_o(2m, σ₂ ⊗ 1_m)`.
pub fn make_asp(m: usize) -> Result<CQGPresentation> {
    let f = ScalarMatrix::sigma2().kron(&ScalarMatrix::identity(m));
    Ok(make_ao(2 * m, &f)?.renamed(format!("A_sp({})", m)))
}

/// The half-liberated unitary group: biunitarity plus `ab°c = cb°a` for
/// every triple of fundamental entries.
pub fn make_austar(n: usize) -> Result<CQGPresentation> {
    if n == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let mut rels = au_relations(&GenMatrix::generic(n, 0), &ScalarMatrix::identity(n))?;
    let entries: Vec<NCPoly> =
        (1..=n).cartesian_product(1..=n).map(|(i, j)| u(i, j)).collect();
    for a in &entries {
        for b in &entries {
            for c in &entries {
                let bs = b.star();
                rels.push(a.mul(&bs).mul(c).sub(&c.mul(&bs).mul(a)));
            }
        }
    }
    single(format!("A_u*({})", n), n, rels, true)
}

/// The quantum permutation group: a magic unitary.
pub fn make_as(n: usize) -> Result<CQGPresentation> {
    if n == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let mut rels = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            rels.push(u(i, j).star().sub(&u(i, j)));
            rels.push(u(i, j).mul(&u(i, j)).sub(&u(i, j)));
        }
    }
    for i in 1..=n {
        let mut row = NCPoly::one().neg();
        let mut col = NCPoly::one().neg();
        for j in 1..=n {
            row.add_assign(&u(i, j));
            col.add_assign(&u(j, i));
        }
        rels.push(row);
        rels.push(col);
    }
    single(format!("A_s({})", n), n, rels, true)
}

fn inversions(p: &[usize]) -> i32 {
    let mut c = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                c += 1;
            }
        }
    }
    c
}

/// `Σ_p (-q)^{inv p} u_{r_1,p(c_1)} ... u_{r_m,p(c_m)}` over the bijections
/// of the ordered column set.
fn quantum_minor(rows: &[usize], cols: &[usize]) -> NCPoly {
    let mq = Scalar::q().neg();
    let mut out = NCPoly::zero();
    for p in cols.iter().copied().permutations(cols.len()) {
        let mut term = NCPoly::constant(mq.pow(inversions(&p)));
        for (r, c) in rows.iter().zip(&p) {
            term = term.mul(&u(*r, *c));
        }
        out.add_assign(&term);
    }
    out
}

/// `SU_q(n)` for symbolic `q = s²`, `n ≤ 4`.
pub fn make_suq(n: usize) -> Result<CQGPresentation> {
    if n == 0 || n > 4 {
        return Err(Error::UnsupportedSize(n));
    }
    let q = Scalar::q();
    let qq = &q - &q.inv();
    let mut rels = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                rels.push(u(i, k).mul(&u(j, k)).sub(&u(j, k).mul(&u(i, k)).scale(&q)));
                rels.push(u(k, i).mul(&u(k, j)).sub(&u(k, j).mul(&u(k, i)).scale(&q)));
            }
            for k in 1..=n {
                for l in k + 1..=n {
                    rels.push(u(i, l).mul(&u(j, k)).sub(&u(j, k).mul(&u(i, l))));
                    rels.push(
                        u(i, k)
                            .mul(&u(j, l))
                            .sub(&u(j, l).mul(&u(i, k)))
                            .sub(&u(i, l).mul(&u(j, k)).scale(&qq)),
                    );
                }
            }
        }
    }
    let all: Vec<usize> = (1..=n).collect();
    rels.push(quantum_minor(&all, &all).sub(&NCPoly::one()));
    let mq = q.neg();
    for i in 1..=n {
        for j in 1..=n {
            let ks: Vec<usize> = all.iter().copied().filter(|&k| k != i).collect();
            let ls: Vec<usize> = all.iter().copied().filter(|&l| l != j).collect();
            let cof = quantum_minor(&ks, &ls).scale(&mq.pow(j as i32 - i as i32));
            rels.push(u(i, j).star().sub(&cof));
        }
    }
    single(format!("SU_q({})", n), n, rels, false)
}

/// The quantum unitary group of `⊕ M_{n_k}` with state `R`: the free
/// product of `A_u(n_k, R_kᵗ)`.
pub fn quantum_unitary_complex(sizes: &[usize], r: &StateSpec) -> Result<CQGPresentation> {
    r.check_against(&ComplexifiedAlgebra::from_sizes(sizes))?;
    let factors: Vec<CQGPresentation> = sizes
        .iter()
        .zip(&r.blocks)
        .map(|(&n, rk)| make_au(n, &rk.transpose()))
        .collect::<Result<_>>()?;
    let label = sizes.iter().map(|n| format!("M{}", n)).join("+");
    if factors.len() == 1 {
        let p = factors.into_iter().next().expect("one factor");
        return Ok(p.renamed(format!("Q_u({})", label)));
    }
    Ok(free_product(&factors)?.renamed(format!("Q_u({})", label)))
}

/// Relations expressing that `Ad_V` preserves `φ_R` and `Ad_{V*}` preserves
/// `φ_{R⁻¹}`, computed from matrix units, plus unitarity of `V`.
pub fn derive_from_state_invariance(n: usize, r: &ScalarMatrix) -> Result<RelationSet> {
    let rinv = check_square(r, n, "R")?;
    let v = GenMatrix::generic(n, 0);
    let vs = v.adjoint();
    let mut rels = unitarity(&v)?;
    let phi = |m: &ScalarMatrix, x: &GenMatrix| -> NCPoly {
        let mut acc = NCPoly::zero();
        for k in 0..n {
            for l in 0..n {
                acc.add_scaled(&x.get(k, l), m.get(l, k));
            }
        }
        acc
    };
    for i in 0..n {
        for j in 0..n {
            let e = GenMatrix::from_scalar(&ScalarMatrix::unit(n, i, j));
            let ad = v.mul(&e)?.mul(&vs)?;
            rels.push(phi(r, &ad).sub(&NCPoly::constant(r.get(j, i).clone())));
            let ad_star = vs.mul(&e)?.mul(&v)?;
            rels.push(phi(&rinv, &ad_star).sub(&NCPoly::constant(rinv.get(j, i).clone())));
        }
    }
    Ok(RelationSet::new(rels))
}

/// `⟨x, y⟩'_B = Σ_ab B_ab x_a° y_b` for vectors over the free algebra.
fn sesquilinear(b: &ScalarMatrix, x: &[NCPoly], y: &[NCPoly]) -> NCPoly {
    let mut acc = NCPoly::zero();
    for (a, xa) in x.iter().enumerate() {
        for (c, yc) in y.iter().enumerate() {
            if !b.get(a, c).is_zero() {
                acc.add_scaled(&xa.star().mul(yc), b.get(a, c));
            }
        }
    }
    acc
}

/// Relations saying that the coaction `e_i ↦ Σ_j e_j ⊗ u_ij` is unitary and
/// preserves `⟨,⟩'_B`, while its adjoint preserves `⟨,⟩'_{B⁻¹}`.
pub fn derive_from_bilinear(b: &ScalarMatrix) -> Result<RelationSet> {
    let n = b.rows();
    let binv = check_square(b, n, "B")?;
    let um = GenMatrix::generic(n, 0);
    let mut rels = unitarity(&um)?;
    let image: Vec<Vec<NCPoly>> = (0..n).map(|i| (0..n).map(|j| um.get(i, j)).collect()).collect();
    let adj: Vec<Vec<NCPoly>> =
        (0..n).map(|i| (0..n).map(|j| um.get(j, i).star()).collect()).collect();
    for i in 0..n {
        for k in 0..n {
            let p = sesquilinear(b, &image[i], &image[k]);
            rels.push(p.sub(&NCPoly::constant(b.get(i, k).clone())));
            let p = sesquilinear(&binv, &adj[i], &adj[k]);
            rels.push(p.sub(&NCPoly::constant(binv.get(i, k).clone())));
        }
    }
    Ok(RelationSet::new(rels))
}
