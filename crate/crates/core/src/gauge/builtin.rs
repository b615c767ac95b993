//! The worked examples: five Einstein-Yang-Mills families, the triple on
//! `H ⊕ H ⊕ M_4(C)`, and the finite Standard Model triple, together with
//! the displayed forms of their gauge corepresentations.

use std::collections::BTreeMap;

use super::{
    compare_supports, expand_terms, gauge_corep, FiniteSpectralTriple, GaugeReport, KernelClass,
    SparseMatrix, SupportMismatch, Unit,
};
use crate::cqg::{quantum_unitary_real, CQGPresentation};
use crate::error::{Error, Result};
use crate::fdalg::RealCStarSpec;
use crate::freestar::NCPoly;
use crate::matrep::GenMatrix;
use crate::scalars::{Scalar, ScalarMatrix};

/// Accepted names; `n` is a positive size.
pub const BUILTIN_NAMES: &[&str] =
    &["eym-c(n)", "eym-r(n)", "eym-h(n)", "eym-c4(n)", "eym-c5(n)", "aev", "sm"];

/// Largest size accepted for the parametrised families.
const MAX_EYM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Eym {
    C,
    R,
    H,
    C4,
    C5,
}

enum Name {
    Eym(Eym, usize),
    Aev,
    Sm,
}

fn parse_name(name: &str) -> Result<Name> {
    let unknown = || Error::UnknownName(name.to_string());
    match name {
        "aev" => return Ok(Name::Aev),
        "sm" => return Ok(Name::Sm),
        _ => {}
    }
    let rest = name.strip_prefix("eym-").ok_or_else(unknown)?;
    let (family, size) = rest.split_once('(').ok_or_else(unknown)?;
    let n: usize = size.strip_suffix(')').and_then(|s| s.parse().ok()).ok_or_else(unknown)?;
    let family = match family {
        "c" => Eym::C,
        "r" => Eym::R,
        "h" => Eym::H,
        "c4" => Eym::C4,
        "c5" => Eym::C5,
        _ => return Err(unknown()),
    };
    if n == 0 || n > MAX_EYM {
        return Err(Error::UnsupportedSize(n));
    }
    Ok(Name::Eym(family, n))
}

fn e(n: usize, i: usize, j: usize) -> SparseMatrix {
    SparseMatrix::unit(n, i, j)
}

fn id(n: usize) -> SparseMatrix {
    SparseMatrix::identity(n)
}

fn kron(f: &[SparseMatrix]) -> SparseMatrix {
    SparseMatrix::kron_all(f)
}

/// `a ↦ aᵗ` on `M_m(C)` with basis `e_ab ↦ a·m + b`.
fn transpose_map(m: usize) -> SparseMatrix {
    let mut entries = Vec::new();
    for a in 0..m {
        for b in 0..m {
            entries.push((b * m + a, a * m + b, Scalar::one()));
        }
    }
    SparseMatrix::from_entries(m * m, entries)
}

/// `x ⊗ y ↦ y ⊗ x` on `C^m ⊗ C^m`.
fn swap(m: usize) -> SparseMatrix {
    transpose_map(m)
}

fn flip() -> SparseMatrix {
    SparseMatrix::from_entries(2, [(0, 1, Scalar::one()), (1, 0, Scalar::one())])
}

fn eym(family: Eym, n: usize) -> Result<FiniteSpectralTriple> {
    let (tag, spec) = match family {
        Eym::C => ("c", RealCStarSpec::single(crate::fdalg::DivRing::C, n)?),
        Eym::R => ("r", RealCStarSpec::single(crate::fdalg::DivRing::R, n)?),
        Eym::H => ("h", RealCStarSpec::single(crate::fdalg::DivRing::H, n)?),
        Eym::C4 => ("c4", RealCStarSpec::single(crate::fdalg::DivRing::C, n)?),
        Eym::C5 => ("c5", RealCStarSpec::single(crate::fdalg::DivRing::C, n)?),
    };
    // Hilbert space M_m(C), or two copies of it, with left multiplication
    let m = if family == Eym::H { 2 * n } else { n };
    let mut pi: BTreeMap<Unit, SparseMatrix> = BTreeMap::new();
    let (dim, j0, kernel) = match family {
        Eym::C | Eym::R | Eym::H => {
            for i in 0..m {
                for j in 0..m {
                    pi.insert((0, i, j), kron(&[e(m, i, j), id(m)]));
                }
            }
            let k = if family == Eym::C { KernelClass::Circle } else { KernelClass::Signs };
            (m * m, transpose_map(m), k)
        }
        Eym::C4 | Eym::C5 => {
            // a acts as a on the first copy and as ā on the second
            for copy in 0..2 {
                for i in 0..n {
                    for j in 0..n {
                        pi.insert((copy, i, j), kron(&[e(2, copy, copy), e(n, i, j), id(n)]));
                    }
                }
            }
            let (outer, k) = if family == Eym::C4 {
                (id(2), KernelClass::Circle)
            } else {
                (flip(), KernelClass::Signs)
            };
            (2 * n * n, outer.kron(&transpose_map(n)), k)
        }
    };
    FiniteSpectralTriple::new(format!("eym-{}({})", tag, n), spec, dim, pi, j0, 1, Some(kernel))
}

/// `C⁴ ⊗ C⁴ ⊗ C²`; `H ⊕ H ⊂ M_4(C)` acts on the first leg over `e_11`,
/// `M_4(C)` over `e_22`; `J = (swap ⊗ flip) ∘ conj`.
fn aev() -> Result<FiniteSpectralTriple> {
    let spec: RealCStarSpec = "H(1)+H(1)+C(4)".parse()?;
    let mut pi: BTreeMap<Unit, SparseMatrix> = BTreeMap::new();
    for (b, off) in [(0, 0), (1, 2)] {
        for i in 0..2 {
            for j in 0..2 {
                pi.insert((b, i, j), kron(&[e(4, i + off, j + off), id(4), e(2, 0, 0)]));
            }
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            pi.insert((2, i, j), kron(&[e(4, i, j), id(4), e(2, 1, 1)]));
        }
    }
    let j0 = swap(4).kron(&flip());
    FiniteSpectralTriple::new("aev", spec, 32, pi, j0, 1, None)
}

/// `C² ⊗ C⁴ ⊗ C⁴ ⊗ C³` with the finite Standard Model representation of
/// `C ⊕ H ⊕ M_3(C)`.
fn sm() -> Result<FiniteSpectralTriple> {
    let spec: RealCStarSpec = "C(1)+H(1)+C(3)".parse()?;
    let mid = e(4, 1, 1).add(&e(4, 2, 2))?;
    let mut pi: BTreeMap<Unit, SparseMatrix> = BTreeMap::new();
    // λ: on e_11 of the first leg over e_44, and on e_11 of the second leg
    // over e_22 + e_33
    let lambda = kron(&[e(2, 0, 0), id(4), e(4, 3, 3), id(3)])
        .add(&kron(&[id(2), e(4, 0, 0), mid.clone(), id(3)]))?;
    pi.insert((0, 0, 0), lambda);
    // λ̄: on e_22 of the first leg over e_44
    pi.insert((1, 0, 0), kron(&[e(2, 1, 1), id(4), e(4, 3, 3), id(3)]));
    for i in 0..2 {
        for j in 0..2 {
            pi.insert((2, i, j), kron(&[e(2, i, j), id(4), e(4, 0, 0), id(3)]));
        }
    }
    // m sits in rows and columns 2..4 of the second leg; m̄ acts as zero
    for i in 0..3 {
        for j in 0..3 {
            pi.insert((3, i, j), kron(&[id(2), e(4, i + 1, j + 1), mid.clone(), id(3)]));
        }
    }
    let p = SparseMatrix::from_entries(
        4,
        [(0, 2, Scalar::one()), (1, 3, Scalar::one()), (2, 0, Scalar::one()), (3, 1, Scalar::one())],
    );
    let j0 = kron(&[id(2), id(4), p, id(3)]);
    FiniteSpectralTriple::new("sm", spec, 96, pi, j0, 1, None)
}

/// A builtin triple by name, e.g. `eym-c(2)`, `aev`, `sm`.
pub fn builtin_triple(name: &str) -> Result<FiniteSpectralTriple> {
    match parse_name(name)? {
        Name::Eym(f, n) => eym(f, n),
        Name::Aev => aev(),
        Name::Sm => sm(),
    }
}

/// Entry `(i, j)` of block `b`, 0-based.
fn entry(pres: &CQGPresentation, b: usize, i: usize, j: usize) -> Result<NCPoly> {
    let blk = pres
        .blocks()
        .get(b)
        .ok_or_else(|| Error::BasisMismatch(format!("{} has no block {}", pres.name(), b + 1)))?;
    if i >= blk.matrix.rows() || j >= blk.matrix.cols() {
        return Err(Error::BasisMismatch(format!("block {} has no entry ({}, {})", b + 1, i + 1, j + 1)));
    }
    Ok(blk.matrix.get(i, j))
}

type Terms = Vec<(SparseMatrix, NCPoly)>;

fn eym_display(family: Eym, n: usize, pres: &CQGPresentation) -> Result<Terms> {
    let m = if family == Eym::H { 2 * n } else { n };
    let mut u = vec![vec![NCPoly::zero(); m]; m];
    for (i, row) in u.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = entry(pres, 0, i, j)?;
        }
    }
    let mut terms = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let (a, b) = (&u[l][i], &u[k][j]);
                    match family {
                        // V(e_ij) = Σ e_lk ⊗ u_li u_kj°
                        Eym::C | Eym::R | Eym::H => {
                            terms.push((e(m * m, l * m + k, i * m + j), a.mul(&b.star())));
                        }
                        Eym::C4 | Eym::C5 => {
                            let (first, second) = if family == Eym::C4 {
                                (a.mul(&b.star()), a.star().mul(b))
                            } else {
                                (a.mul(b), a.star().mul(&b.star()))
                            };
                            let nn = n * n;
                            let (row, col) = (l * n + k, i * n + j);
                            terms.push((e(2 * nn, row, col), first));
                            terms.push((e(2 * nn, nn + row, nn + col), second));
                        }
                    }
                }
            }
        }
    }
    Ok(terms)
}

/// The two cross terms `a_kl u°_ij` and `u_ij a°_kl`.
fn aev_display(pres: &CQGPresentation) -> Result<Terms> {
    let mut terms = Vec::new();
    for (b, off) in [(0, 0), (1, 2)] {
        for k in 0..2 {
            for l in 0..2 {
                let a = entry(pres, b, k, l)?;
                for i in 0..4 {
                    for j in 0..4 {
                        let u = entry(pres, 2, i, j)?;
                        terms.push((
                            kron(&[e(4, k + off, l + off), e(4, i, j), e(2, 0, 0)]),
                            a.mul(&u.star()),
                        ));
                        terms.push((
                            kron(&[e(4, i, j), e(4, k + off, l + off), e(2, 1, 1)]),
                            u.mul(&a.star()),
                        ));
                    }
                }
            }
        }
    }
    Ok(terms)
}

/// The seven-term sum as printed for the Standard Model triple: `z` is the
/// circle generator, `a` the `SU(2)` block and `u_ij` (rows and columns
/// 2..4 of the second leg) the `A_u(3)` block.
fn sm_display(pres: &CQGPresentation) -> Result<Terms> {
    let z = entry(pres, 0, 0, 0)?;
    let zb = z.star();
    let i2 = id(2);
    let i3 = id(3);
    let i4 = id(4);
    let mut terms = vec![(
        kron(&[i2.clone(), i4.clone(), e(4, 3, 3), i3.clone()])
            .add(&kron(&[i2.clone(), e(4, 0, 0), e(4, 3, 3), i3.clone()]))?,
        z.mul(&zb),
    )];
    for i in 0..2 {
        for j in 0..2 {
            let a = entry(pres, 2, i, j)?;
            terms.push((kron(&[e(2, i, j), e(4, 0, 0), e(4, 2, 2), i3.clone()]), z.mul(&a.star())));
            terms.push((kron(&[e(2, i, j), e(4, 0, 0), e(4, 0, 0), i3.clone()]), a.mul(&zb)));
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            let u = entry(pres, 3, i, j)?;
            let leg = e(4, i + 1, j + 1);
            terms.push((kron(&[i2.clone(), leg.clone(), e(4, 3, 3), i3.clone()]), z.mul(&u.star())));
            terms.push((kron(&[i2.clone(), leg.clone(), e(4, 1, 1), i3.clone()]), u.star().mul(&zb)));
            for k in 0..2 {
                for l in 0..2 {
                    let a = entry(pres, 2, k, l)?;
                    terms.push((
                        kron(&[e(2, k, l), leg.clone(), e(4, 0, 0), i3.clone()]),
                        a.mul(&u.star()),
                    ));
                    terms.push((
                        kron(&[e(2, k, l), leg.clone(), e(4, 2, 2), i3.clone()]),
                        u.mul(&a.star()),
                    ));
                }
            }
        }
    }
    Ok(terms)
}

/// The gauge corepresentation `V` as displayed for a builtin triple, with
/// generators read off the fundamental blocks of `pres`.
pub fn displayed_v(name: &str, pres: &CQGPresentation) -> Result<GenMatrix> {
    let (terms, dim) = match parse_name(name)? {
        Name::Eym(f, n) => {
            let dim = match f {
                Eym::C | Eym::R => n * n,
                Eym::H => 4 * n * n,
                Eym::C4 | Eym::C5 => 2 * n * n,
            };
            (eym_display(f, n, pres)?, dim)
        }
        Name::Aev => (aev_display(pres)?, 32),
        Name::Sm => (sm_display(pres)?, 96),
    };
    expand_terms(dim, terms.iter().map(|(s, p)| (s, p)))
}

/// The quantum unitary group of a triple's algebra with `F = 1`.
pub fn unitary_group_of(t: &FiniteSpectralTriple) -> Result<CQGPresentation> {
    let f: Vec<ScalarMatrix> = t.block_sizes().into_iter().map(ScalarMatrix::identity).collect();
    quantum_unitary_real(t.spec(), &f)
}

/// The Standard Model computation compared against its printed form.
#[derive(Clone, Debug)]
pub struct SmGauge {
    pub triple: FiniteSpectralTriple,
    pub presentation: CQGPresentation,
    pub report: GaugeReport,
    pub display: GenMatrix,
    pub mismatches: Vec<SupportMismatch>,
}

impl SmGauge {
    pub fn matches_display(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn sm_gauge() -> Result<SmGauge> {
    let triple = builtin_triple("sm")?;
    let presentation = unitary_group_of(&triple)?;
    let report = gauge_corep(&triple, &presentation)?;
    let display = displayed_v("sm", &presentation)?;
    let mismatches = compare_supports(&report.v, &display);
    Ok(SmGauge { triple, presentation, report, display, mismatches })
}
