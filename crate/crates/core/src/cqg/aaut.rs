use std::collections::BTreeMap;

use super::{Block, CQGPresentation, Tags};
use crate::error::{Error, Result};
use crate::fdalg::{complexify, DivRing, RealCStarSpec, SigmaAut};
use crate::freestar::{Gen, NCPoly};
use crate::ideal::RelationSet;
use crate::matrep::GenMatrix;
use crate::scalars::Scalar;

/// A matrix unit `e^x_ij` of `⊕ M_{n_x}`: block label (0 for a lone block),
/// row and column, all 1-based.
type Unit = (usize, usize, usize);

struct Basis {
    units: Vec<Unit>,
    sizes: BTreeMap<usize, usize>,
    index: BTreeMap<Unit, usize>,
}

impl Basis {
    fn new(sizes: &[usize]) -> Basis {
        let lone = sizes.len() == 1;
        let mut units = Vec::new();
        let mut by_label = BTreeMap::new();
        for (b, &n) in sizes.iter().enumerate() {
            let x = if lone { 0 } else { b + 1 };
            by_label.insert(x, n);
            for i in 1..=n {
                for j in 1..=n {
                    units.push((x, i, j));
                }
            }
        }
        let index = units.iter().enumerate().map(|(k, u)| (*u, k)).collect();
        Basis { units, sizes: by_label, index }
    }

    fn label(&self, block: usize) -> usize {
        if self.sizes.len() == 1 {
            0
        } else {
            block + 1
        }
    }
}

/// The coefficient `a_{qp}` of `e_q` in `α(e_p)`.
fn a(q: Unit, p: Unit) -> NCPoly {
    NCPoly::gen(Gen::aut(q.0, q.1, q.2, p.0, p.1, p.2))
}

fn delta(b: bool) -> NCPoly {
    if b {
        NCPoly::one()
    } else {
        NCPoly::zero()
    }
}

/// Relations for a coaction `α(e_p) = Σ_q e_q ⊗ a_qp` of `⊕ M_{n_x}` that
/// is a unital *-homomorphism preserving the trace, and, with `sigma`,
/// commutes with the real structure: `(σ ⊗ *) α = α σ`.
fn aaut_relations(basis: &Basis, sigma: Option<&SigmaAut>) -> Vec<NCPoly> {
    let units = &basis.units;
    let mut rels = Vec::new();
    // multiplicativity: α(e_p) α(e_r) = α(e_p e_r), read off at e_t
    for &p in units {
        for &r in units {
            let prod = (p.0 == r.0 && p.2 == r.1).then_some((p.0, p.1, r.2));
            for &(x, ta, td) in units {
                let mut acc = NCPoly::zero();
                for b in 1..=basis.sizes[&x] {
                    acc.add_assign(&a((x, ta, b), p).mul(&a((x, b, td), r)));
                }
                if let Some(pr) = prod {
                    acc = acc.sub(&a((x, ta, td), pr));
                }
                rels.push(acc);
            }
        }
    }
    // the companion family: Σ_r a^{ij}_{kr} a^{mn}_{rl} = δ_jm a^{in}_{kl}
    for &q in units {
        for &q2 in units {
            for &(y, k, l) in units {
                let mut acc = NCPoly::zero();
                for r in 1..=basis.sizes[&y] {
                    acc.add_assign(&a(q, (y, k, r)).mul(&a(q2, (y, r, l))));
                }
                if q.0 == q2.0 && q.2 == q2.1 {
                    acc = acc.sub(&a((q.0, q.1, q2.2), (y, k, l)));
                }
                rels.push(acc);
            }
        }
    }
    // star: α(e_p)* = α(e_p*)
    for &(x, k, l) in units {
        for &(y, i, j) in units {
            rels.push(a((x, l, k), (y, i, j)).star().sub(&a((x, k, l), (y, j, i))));
        }
    }
    let diag: Vec<Unit> = units.iter().copied().filter(|u| u.1 == u.2).collect();
    // unit: α(1) = 1 ⊗ 1
    for &q in units {
        let mut acc = delta(q.1 == q.2).neg();
        for &p in &diag {
            acc.add_assign(&a(q, p));
        }
        rels.push(acc);
    }
    // trace: (Tr ⊗ id) α(e_p) = Tr(e_p) 1
    for &p in units {
        let mut acc = delta(p.1 == p.2).neg();
        for &q in &diag {
            acc.add_assign(&a(q, p));
        }
        rels.push(acc);
    }
    if let Some(sigma) = sigma {
        // σ(e_p) = Σ_q S_qp e_q
        let mut s: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (pi, &(y, i, j)) in units.iter().enumerate() {
            let b = if y == 0 { 0 } else { y - 1 };
            let (tb, m) = sigma.on_unit(b, i - 1, j - 1);
            let x = basis.label(tb);
            for (ra, rc, c) in m.entries() {
                if !c.is_zero() {
                    s.insert((basis.index[&(x, ra + 1, rc + 1)], pi), c.clone());
                }
            }
        }
        for (ti, &t) in units.iter().enumerate() {
            for (pi, &p) in units.iter().enumerate() {
                let mut acc = NCPoly::zero();
                for (qi, &q) in units.iter().enumerate() {
                    if let Some(c) = s.get(&(ti, qi)) {
                        acc.add_scaled(&a(q, p).star(), c);
                    }
                    if let Some(c) = s.get(&(qi, pi)) {
                        acc.add_scaled(&a(t, q), &c.neg());
                    }
                }
                rels.push(acc);
            }
        }
    }
    rels.retain(|r| !r.is_zero());
    rels
}

fn presentation(name: String, sizes: &[usize], sigma: Option<&SigmaAut>) -> Result<CQGPresentation> {
    let basis = Basis::new(sizes);
    let d = basis.units.len();
    let matrix = GenMatrix::from_fn(d, d, |i, j| a(basis.units[i], basis.units[j]));
    CQGPresentation::new(
        name,
        vec![Block { label: 0, matrix }],
        RelationSet::new(aaut_relations(&basis, sigma)),
        Tags { kac: true, commutative_claimed: false },
    )
}

/// The quantum automorphism group of `(M_n, Tr)`.
pub fn make_aaut(n: usize) -> Result<CQGPresentation> {
    if !(2..16).contains(&n) {
        return Err(Error::UnsupportedSize(n));
    }
    presentation(format!("A_aut(M{})", n), &[n], None)
}

/// The quantum automorphism group of a real algebra: a single matrix block
/// over R, C or H, or a direct sum of copies of R. The result is linearly
/// eliminated.
pub fn make_aaut_real(spec: &RealCStarSpec) -> Result<CQGPresentation> {
    Ok(make_aaut_real_unreduced(spec)?.eliminated()?.0)
}

/// As [`make_aaut_real`], before linear elimination.
pub fn make_aaut_real_unreduced(spec: &RealCStarSpec) -> Result<CQGPresentation> {
    let blocks = spec.blocks();
    let points = blocks.iter().all(|b| b.ring == DivRing::R && b.n == 1);
    if blocks.len() != 1 && !points {
        return Err(Error::UnsupportedSpec(format!(
            "{}: expected one matrix block or a sum of copies of R",
            spec
        )));
    }
    let (alg, sigma) = complexify(spec);
    let sizes = alg.sizes();
    if sizes.iter().any(|&n| n >= 16) || sizes.len() >= 16 {
        return Err(Error::UnsupportedSize(sizes.iter().copied().max().unwrap_or(0)));
    }
    presentation(format!("A_aut,R({})", spec), &sizes, Some(&sigma))
}
