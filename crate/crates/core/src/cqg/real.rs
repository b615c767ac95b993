use super::named::quantum_unitary_complex;
use super::{CQGPresentation, CheckReport};
use crate::error::{Error, Result};
use crate::fdalg::{complexify, ComplexifiedAlgebra, RealCStarSpec, SigmaAut, StateSpec};
use crate::freestar::NCPoly;
use crate::ideal::RelationSet;
use crate::matrep::{relations_from_eq, GenMatrix};
use crate::scalars::ScalarMatrix;

fn check_f(alg: &ComplexifiedAlgebra, f: &[ScalarMatrix]) -> Result<Vec<ScalarMatrix>> {
    if f.len() != alg.blocks.len() || f.iter().zip(&alg.blocks).any(|(m, b)| m.rows() != b.size) {
        return Err(Error::BlockMismatch(format!(
            "F has blocks {:?}, complexification has {:?}",
            f.iter().map(|m| m.rows()).collect::<Vec<_>>(),
            alg.sizes()
        )));
    }
    f.iter()
        .enumerate()
        .map(|(k, m)| m.inverse().map_err(|_| Error::Singular(format!("F block {}", k))))
        .collect()
}

/// `R = σ(F*F)`, the state preserved by the real quantum unitary group.
pub fn real_state(spec: &RealCStarSpec, f: &[ScalarMatrix]) -> Result<StateSpec> {
    let (alg, sigma) = complexify(spec);
    check_f(&alg, f)?;
    let ff: Vec<ScalarMatrix> =
        f.iter().map(|m| m.adjoint().mul(m)).collect::<Result<_>>()?;
    StateSpec::new(sigma.apply(&ff)?)
}

/// `(σ ⊗ *)(U)` blockwise: `σ` on the matrix units, star on the entries.
fn sigma_star(u: &[GenMatrix], sigma: &SigmaAut) -> Result<Vec<GenMatrix>> {
    let mut out: Vec<GenMatrix> = u.iter().map(|m| GenMatrix::zeros(m.rows(), m.cols())).collect();
    for (b, m) in u.iter().enumerate() {
        for (i, j, p) in m.entries() {
            let (tb, e) = sigma.on_unit(b, i, j);
            let ps = p.star();
            let add = GenMatrix::from_scalar(&e).map(|c| c.mul(&ps));
            out[tb] = out[tb].add(&add)?;
        }
    }
    Ok(out)
}

/// The complex quantum unitary group `Q_u(A_C, σ(F*F))` together with the
/// relations `(σ ⊗ *)(U) = F⁻¹ U F` that cut out the real form.
pub fn real_form_ideal(
    spec: &RealCStarSpec,
    f: &[ScalarMatrix],
) -> Result<(CQGPresentation, RelationSet)> {
    let (alg, sigma) = complexify(spec);
    let finv = check_f(&alg, f)?;
    let r = real_state(spec, f)?;
    let qc = quantum_unitary_complex(&alg.sizes(), &r)?;
    let u: Vec<GenMatrix> = qc.blocks().iter().map(|b| b.matrix.clone()).collect();
    let lhs = sigma_star(&u, &sigma)?;
    let mut extra = Vec::new();
    for (b, ub) in u.iter().enumerate() {
        let rhs = GenMatrix::from_scalar(&finv[b]).mul(ub)?.mul(&GenMatrix::from_scalar(&f[b]))?;
        extra.extend(relations_from_eq(&lhs[b], &rhs)?);
    }
    Ok((qc, RelationSet::new(extra)))
}

/// The quantum unitary group of a real algebra with twist `F` (one matrix
/// per complexified block): `Q_u(A_C, σ(F*F))` divided by
/// `(σ ⊗ *)(U) = F⁻¹ U F`, after linear elimination.
pub fn quantum_unitary_real(spec: &RealCStarSpec, f: &[ScalarMatrix]) -> Result<CQGPresentation> {
    let (qc, extra) = real_form_ideal(spec, f)?;
    let r = real_state(spec, f)?;
    let mut pres = qc.quotient(&extra)?;
    pres.tags.kac = r.blocks.iter().all(|m| m.is_scalar_multiple_of_identity());
    let (pres, _) = pres.eliminated()?;
    Ok(pres.renamed(format!("Q_u,R({})", spec)))
}

/// Verifies `(φ_R ⊗ id) Ad_U(e_ij) = φ_R(e_ij) 1` for every matrix unit of
/// every block, within depth `k_max`.
pub fn trace_preservation_check(
    pres: &CQGPresentation,
    r: &StateSpec,
    k_max: usize,
) -> Result<CheckReport> {
    if r.blocks.len() != pres.blocks().len()
        || r.blocks.iter().zip(pres.blocks()).any(|(m, b)| m.rows() != b.matrix.rows())
    {
        return Err(Error::BlockMismatch("state and fundamental blocks differ".into()));
    }
    let mut pairs = Vec::new();
    for (blk, rb) in pres.blocks().iter().zip(&r.blocks) {
        let u = &blk.matrix;
        let n = u.rows();
        let us = u.adjoint();
        for i in 0..n {
            for j in 0..n {
                let e = GenMatrix::from_scalar(&ScalarMatrix::unit(n, i, j));
                let ad = u.mul(&e)?.mul(&us)?;
                let mut acc = NCPoly::constant(rb.get(j, i).neg());
                for k in 0..n {
                    for l in 0..n {
                        acc.add_scaled(&ad.get(k, l), rb.get(l, k));
                    }
                }
                pairs.push((format!("block {} e[{},{}]", blk.label, i + 1, j + 1), acc));
            }
        }
    }
    CheckReport::run(pairs, pres.relations(), k_max)
}
