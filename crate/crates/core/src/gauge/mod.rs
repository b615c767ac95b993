//! Finite real spectral triples and their quantum gauge groups.
//!
//! A triple is stored through its complexified representation: one `N x N`
//! matrix per matrix unit of the complexification of the algebra, in the
//! block order of [`complexify`]. Units that act as zero are simply absent.

mod builtin;
mod classical;
mod sparse;
mod text;

use std::collections::{BTreeMap, BTreeSet};

use crate::cqg::named::unitarity;
use crate::cqg::{Block, CQGPresentation, CheckReport, SubalgebraView, Tags};
use crate::error::{Error, Result};
use crate::fdalg::{complexify, RealCStarSpec};
use crate::freestar::{NCPoly, Word};
use crate::ideal::RelationSet;
use crate::matrep::{relations_from_eq, GenMatrix};
use crate::scalars::{Scalar, ScalarMatrix};

pub use builtin::{builtin_triple, displayed_v, sm_gauge, unitary_group_of, SmGauge, BUILTIN_NAMES};
pub use classical::{classical_gauge_check, classical_point_residual, ClassicalGaugeReport};
pub use sparse::SparseMatrix;
pub use text::TRIPLE_HEADER;

/// A complexified matrix unit `(block, row, col)`, 0-based.
pub type Unit = (usize, usize, usize);

/// The kernel of `u ↦ u J u J⁻¹` on the unitary group, when known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelClass {
    /// Central unitaries, a circle.
    Circle,
    /// `±1` only.
    Signs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpectralTriple {
    name: String,
    spec: RealCStarSpec,
    dim: usize,
    pi: BTreeMap<Unit, SparseMatrix>,
    j0: SparseMatrix,
    epsilon: i8,
    kernel: Option<KernelClass>,
}

impl FiniteSpectralTriple {
    /// Validates and builds a triple: `π_C` must be a unital *-homomorphism
    /// on matrix units, `J₀ J̄₀ = ε`, `J₀` unitary, and `π_C(a)` must commute
    /// with `J π_C(b) J⁻¹` for every pair of units.
    pub fn new(
        name: impl Into<String>,
        spec: RealCStarSpec,
        dim: usize,
        pi: BTreeMap<Unit, SparseMatrix>,
        j0: SparseMatrix,
        epsilon: i8,
        kernel: Option<KernelClass>,
    ) -> Result<Self> {
        let t = FiniteSpectralTriple { name: name.into(), spec, dim, pi, j0, epsilon, kernel };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTriple(format!("{}: {}", self.name, m)));
        if self.epsilon != 1 && self.epsilon != -1 {
            return bad(format!("sign must be 1 or -1, got {}", self.epsilon));
        }
        let (alg, _) = complexify(&self.spec);
        let sizes = alg.sizes();
        for (&(b, i, j), m) in &self.pi {
            if b >= sizes.len() || i >= sizes[b] || j >= sizes[b] {
                return bad(format!("unit ({}, {}, {}) is not in the complexification", b + 1, i + 1, j + 1));
            }
            if m.n() != self.dim {
                return bad(format!("image of unit ({}, {}, {}) has size {}", b + 1, i + 1, j + 1, m.n()));
            }
        }
        if self.j0.n() != self.dim {
            return bad(format!("J0 has size {}", self.j0.n()));
        }
        let id = SparseMatrix::identity(self.dim);
        if self.j0.mul(&self.j0.adjoint())? != id {
            return bad("J0 is not unitary".into());
        }
        if self.j0.mul(&self.j0.conj())? != id.scale(&self.eps()) {
            return bad("J0 J0-bar differs from the sign".into());
        }
        let units = alg.basis();
        let mut one = SparseMatrix::zeros(self.dim);
        for &(b, i, j) in &units {
            if i == j {
                one = one.add(&self.pi(b, i, i))?;
            }
            if self.pi(b, i, j).adjoint() != self.pi(b, j, i) {
                return bad(format!("image of unit ({}, {}, {}) breaks the star", b + 1, i + 1, j + 1));
            }
        }
        if one != id {
            return bad("representation is not unital".into());
        }
        let conjugated: Vec<SparseMatrix> =
            units.iter().map(|&(b, i, j)| self.opposite(&self.pi(b, i, j))).collect::<Result<_>>()?;
        for &(b, i, j) in &units {
            let x = self.pi(b, i, j);
            for &(c, k, l) in &units {
                let y = self.pi(c, k, l);
                let expect = if b == c && j == k { self.pi(b, i, l) } else { SparseMatrix::zeros(self.dim) };
                if x.mul(&y)? != expect {
                    return bad(format!(
                        "units ({}, {}, {}) and ({}, {}, {}) do not multiply",
                        b + 1,
                        i + 1,
                        j + 1,
                        c + 1,
                        k + 1,
                        l + 1
                    ));
                }
            }
            for (y, &(c, k, l)) in conjugated.iter().zip(&units) {
                if !x.commutes_with(y)? {
                    return bad(format!(
                        "order-zero condition fails for units ({}, {}, {}) and ({}, {}, {})",
                        b + 1,
                        i + 1,
                        j + 1,
                        c + 1,
                        k + 1,
                        l + 1
                    ));
                }
            }
        }
        Ok(())
    }

    fn eps(&self) -> Scalar {
        Scalar::from_int(self.epsilon as i64)
    }

    /// `J a J⁻¹ = ε J₀ ā J̄₀`.
    pub fn opposite(&self, a: &SparseMatrix) -> Result<SparseMatrix> {
        Ok(self.j0.mul(&a.conj())?.mul(&self.j0.conj())?.scale(&self.eps()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &RealCStarSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn j0(&self) -> &SparseMatrix {
        &self.j0
    }

    pub fn kernel(&self) -> Option<KernelClass> {
        self.kernel
    }

    /// `π_C(e^b_ij)`, zero when the unit is in the kernel.
    pub fn pi(&self, b: usize, i: usize, j: usize) -> SparseMatrix {
        self.pi.get(&(b, i, j)).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.dim))
    }

    /// Units with a nonzero image.
    pub fn images(&self) -> impl Iterator<Item = (&Unit, &SparseMatrix)> {
        self.pi.iter().filter(|(_, m)| !m.is_zero())
    }

    /// Block sizes of the complexification.
    pub fn block_sizes(&self) -> Vec<usize> {
        complexify(&self.spec).0.sizes()
    }
}

fn lift(m: &SparseMatrix) -> GenMatrix {
    let mut out = GenMatrix::zeros(m.n(), m.n());
    for (i, j, c) in m.entries() {
        out.set(i, j, NCPoly::constant(c.clone()));
    }
    out
}

/// `Σ S ⊗ p` as an `n x n` matrix over the free algebra.
pub fn expand_terms<'a>(
    n: usize,
    terms: impl IntoIterator<Item = (&'a SparseMatrix, &'a NCPoly)>,
) -> Result<GenMatrix> {
    let mut acc: BTreeMap<(usize, usize), NCPoly> = BTreeMap::new();
    for (s, p) in terms {
        if s.n() != n {
            return Err(Error::DimensionMismatch(format!("support of size {} in {}", s.n(), n)));
        }
        for (i, j, c) in s.entries() {
            acc.entry((i, j)).or_default().add_scaled(p, c);
        }
    }
    let mut out = GenMatrix::zeros(n, n);
    for ((i, j), p) in acc {
        out.set(i, j, p);
    }
    Ok(out)
}

/// `U^π = Σ_b Σ_ij π_C(e^b_ij) ⊗ U^b_ij`.
pub fn build_upi(t: &FiniteSpectralTriple, pres: &CQGPresentation) -> Result<GenMatrix> {
    let sizes = t.block_sizes();
    let have: Vec<usize> = pres.blocks().iter().map(|b| b.matrix.rows()).collect();
    if sizes != have {
        return Err(Error::BasisMismatch(format!(
            "{} has blocks {:?}, {} has {:?}",
            t.name(),
            sizes,
            pres.name(),
            have
        )));
    }
    let entries: Vec<(SparseMatrix, NCPoly)> = t
        .images()
        .map(|(&(b, i, j), m)| (m.clone(), pres.blocks()[b].matrix.get(i, j)))
        .collect();
    expand_terms(t.dim(), entries.iter().map(|(s, p)| (s, p)))
}

/// `U^π̄ = ε (J₀ ⊗ 1) Ū^π (J̄₀ ⊗ 1)`.
pub fn build_upibar(t: &FiniteSpectralTriple, upi: &GenMatrix) -> Result<GenMatrix> {
    Ok(lift(t.j0()).mul(&upi.bar())?.mul(&lift(&t.j0().conj()))?.scale(&t.eps()))
}

/// Splits `M = Σ_w S_w ⊗ w` by monomial.
pub fn supports(m: &GenMatrix) -> BTreeMap<Word, SparseMatrix> {
    let mut raw: BTreeMap<Word, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
    for (i, j, p) in m.entries() {
        for (w, c) in p.terms() {
            raw.entry(w.clone()).or_default().push((i, j, c.clone()));
        }
    }
    raw.into_iter().map(|(w, e)| (w, SparseMatrix::from_entries(m.rows(), e))).collect()
}

/// A monomial whose support differs between two matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMismatch {
    pub word: Word,
    pub expected: SparseMatrix,
    pub actual: SparseMatrix,
}

/// Compares two matrices as sets of `(support, monomial)` pairs.
pub fn compare_supports(actual: &GenMatrix, expected: &GenMatrix) -> Vec<SupportMismatch> {
    let a = supports(actual);
    let e = supports(expected);
    let n = actual.rows();
    let words: BTreeSet<&Word> = a.keys().chain(e.keys()).collect();
    words
        .into_iter()
        .filter_map(|w| {
            let x = a.get(w).cloned().unwrap_or_else(|| SparseMatrix::zeros(n));
            let y = e.get(w).cloned().unwrap_or_else(|| SparseMatrix::zeros(n));
            (x != y).then(|| SupportMismatch { word: w.clone(), expected: y, actual: x })
        })
        .collect()
}

/// The gauge corepresentation and the subalgebra its entries generate.
#[derive(Clone, Debug)]
pub struct GaugeReport {
    pub upi: GenMatrix,
    pub upibar: GenMatrix,
    pub v: GenMatrix,
    /// Distinct monomials of the entries of `V`, sorted.
    pub monomials: Vec<Word>,
    pub view: SubalgebraView,
    /// Entries of `V V* - 1` and `V* V - 1` tested against the ideal.
    pub unitarity: CheckReport,
}

impl GaugeReport {
    pub fn supports(&self) -> BTreeMap<Word, SparseMatrix> {
        supports(&self.v)
    }
}

/// Cofactor depth for unitarity checks. Entries of `V V*` have degree 4 and
/// reduce through relations with one letter on each side.
pub const GAUGE_UNITARITY_DEPTH: usize = 1;

fn unitarity_defects(tag: &str, m: &GenMatrix) -> Result<Vec<(String, NCPoly)>> {
    let one = GenMatrix::identity(m.rows());
    let mut out = Vec::new();
    for (side, d) in [("M M*", m.mul(&m.adjoint())?), ("M* M", m.adjoint().mul(m)?)] {
        for (i, j, p) in d.sub(&one)?.entries() {
            out.push((format!("{} - 1 for {} [{},{}]", side, tag, i + 1, j + 1), p.clone()));
        }
    }
    Ok(out)
}

/// `V = U^π U^π̄`, its generating monomials, and a check that `V` is unitary.
pub fn gauge_corep(t: &FiniteSpectralTriple, pres: &CQGPresentation) -> Result<GaugeReport> {
    let upi = build_upi(t, pres)?;
    let upibar = build_upibar(t, &upi)?;
    let v = upi.mul(&upibar)?;
    let monomials: Vec<Word> = supports(&v).into_keys().collect();
    let view = SubalgebraView {
        ambient: pres.clone(),
        generators: monomials.iter().cloned().map(NCPoly::word).collect(),
    };
    let unitarity =
        CheckReport::run(unitarity_defects("V", &v)?, pres.relations(), GAUGE_UNITARITY_DEPTH)?;
    Ok(GaugeReport { upi, upibar, v, monomials, view, unitarity })
}

/// Unitarity of the two factors `U^π` and `U^π̄` on both sides.
pub fn factor_unitarity(report: &GaugeReport, pres: &CQGPresentation) -> Result<CheckReport> {
    let mut pairs = unitarity_defects("U^pi", &report.upi)?;
    pairs.extend(unitarity_defects("U^pibar", &report.upibar)?);
    CheckReport::run(pairs, pres.relations(), GAUGE_UNITARITY_DEPTH)
}

/// Relations of the universal unitary `U` with `(J₀ ⊗ 1) Ū = U (J₀ ⊗ 1)`.
pub fn qiso_relations_with(j0: &ScalarMatrix) -> Result<RelationSet> {
    if !j0.is_square() {
        return Err(Error::ShapeMismatch("J0 must be square".into()));
    }
    let n = j0.rows();
    let u = GenMatrix::generic(n, 0);
    let j = GenMatrix::from_scalar(j0);
    let mut rels = unitarity(&u)?;
    rels.extend(relations_from_eq(&j.mul(&u.bar())?, &u.mul(&j)?)?);
    Ok(RelationSet::new(rels))
}

/// The case `J₀ = 1` on `C^n`: the entries become self-adjoint.
pub fn qiso_relations(n: usize) -> Result<RelationSet> {
    if n == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    qiso_relations_with(&ScalarMatrix::identity(n))
}

/// [`qiso_relations`] as a presentation on the generic `n x n` block.
pub fn qiso_presentation(n: usize) -> Result<CQGPresentation> {
    CQGPresentation::new(
        format!("QISO+_J(M{})", n),
        vec![Block { label: 0, matrix: GenMatrix::generic(n, 0) }],
        qiso_relations(n)?,
        Tags { kac: true, commutative_claimed: false },
    )
}
