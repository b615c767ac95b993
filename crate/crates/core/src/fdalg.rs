//! Finite-dimensional real C*-algebras given as sums of matrix blocks over
//! R, C or H, their complexifications, and the antilinear involution whose
//! fixed points are the real algebra.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalars::{Scalar, ScalarMatrix};

/// Division ring of a real block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivRing {
    R,
    C,
    H,
}

impl DivRing {
    /// Real dimension of the ring.
    pub fn real_dim(self) -> usize {
        match self {
            DivRing::R => 1,
            DivRing::C => 2,
            DivRing::H => 4,
        }
    }

    fn letter(self) -> char {
        match self {
            DivRing::R => 'R',
            DivRing::C => 'C',
            DivRing::H => 'H',
        }
    }
}

/// `M_n(D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RealBlock {
    pub ring: DivRing,
    pub n: usize,
}

impl RealBlock {
    pub fn real_dim(&self) -> usize {
        self.ring.real_dim() * self.n * self.n
    }
}

/// A direct sum of real matrix blocks, e.g. `R(2) + H(1) + C(3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealCStarSpec {
    blocks: Vec<RealBlock>,
}

impl RealCStarSpec {
    pub fn new(blocks: Vec<RealBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::UnsupportedSpec("at least one block is required".into()));
        }
        if let Some(b) = blocks.iter().find(|b| b.n == 0) {
            return Err(Error::UnsupportedSpec(format!("{}(0) has size zero", b.ring.letter())));
        }
        Ok(RealCStarSpec { blocks })
    }

    pub fn single(ring: DivRing, n: usize) -> Result<Self> {
        RealCStarSpec::new(vec![RealBlock { ring, n }])
    }

    /// `R^n`, the commutative algebra of `n` points.
    pub fn points(n: usize) -> Result<Self> {
        RealCStarSpec::new(vec![RealBlock { ring: DivRing::R, n: 1 }; n])
    }

    pub fn blocks(&self) -> &[RealBlock] {
        &self.blocks
    }

    pub fn real_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.real_dim()).sum()
    }

    /// Blocks of the complexification and the involution `σ`.
    pub fn complexify(&self) -> (ComplexifiedAlgebra, SigmaAut) {
        complexify(self)
    }
}

impl FromStr for RealCStarSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let body = match text.split_once('=') {
            Some((lhs, rhs)) if lhs.trim() == "A" => rhs,
            Some(_) => {
                return Err(Error::Parse { col: 1, msg: "expected 'A = ...'".into() });
            }
            None => text,
        };
        let base = text.len() - body.len();
        let mut blocks = Vec::new();
        let mut col = base;
        for part in body.split('+') {
            let lead = part.len() - part.trim_start().len();
            let p = part.trim();
            let here = col + lead + 1;
            let err = |msg: &str| Error::Parse { col: here, msg: format!("{}: '{}'", msg, p) };
            let mut chars = p.chars();
            let ring = match chars.next() {
                Some('R') => DivRing::R,
                Some('C') => DivRing::C,
                Some('H') => DivRing::H,
                _ => return Err(err("expected R, C or H")),
            };
            let rest = chars.as_str();
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| err("expected '(n)' directly after the ring letter"))?;
            let n: usize = inner.trim().parse().map_err(|_| err("bad block size"))?;
            if n == 0 {
                return Err(err("block size must be positive"));
            }
            blocks.push(RealBlock { ring, n });
            col += part.len() + 1;
        }
        RealCStarSpec::new(blocks)
    }
}

impl fmt::Display for RealCStarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.blocks.iter().map(|b| format!("{}({})", b.ring.letter(), b.n)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// One block `M_m(C)` of the complexification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexBlock {
    pub size: usize,
    /// Index of the real block it comes from.
    pub origin: usize,
    /// 0, or 1 for the second copy of a complex block.
    pub copy: usize,
}

/// `⊕_j M_{m_j}(C)` with the matrix-unit basis `(j, i, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexifiedAlgebra {
    pub blocks: Vec<ComplexBlock>,
}

/// An element of the complexification, one square matrix per block.
pub type Element = Vec<ScalarMatrix>;

impl ComplexifiedAlgebra {
    /// Complex blocks of the given sizes with no real origin recorded.
    pub fn from_sizes(sizes: &[usize]) -> Self {
        ComplexifiedAlgebra {
            blocks: sizes
                .iter()
                .enumerate()
                .map(|(k, &size)| ComplexBlock { size, origin: k, copy: 0 })
                .collect(),
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.size).sum()
    }

    /// Matrix-unit basis as `(block, row, col)`, zero-based, block-major.
    pub fn basis(&self) -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for (b, blk) in self.blocks.iter().enumerate() {
            for i in 0..blk.size {
                for j in 0..blk.size {
                    v.push((b, i, j));
                }
            }
        }
        v
    }

    pub fn zero(&self) -> Element {
        self.blocks.iter().map(|b| ScalarMatrix::zeros(b.size, b.size)).collect()
    }

    pub fn one(&self) -> Element {
        self.blocks.iter().map(|b| ScalarMatrix::identity(b.size)).collect()
    }

    pub fn unit(&self, b: usize, i: usize, j: usize) -> Result<Element> {
        let blk = self
            .blocks
            .get(b)
            .ok_or_else(|| Error::IndexOutOfRange(format!("block {}", b)))?;
        if i >= blk.size || j >= blk.size {
            return Err(Error::IndexOutOfRange(format!("e[{},{}] in block {}", i, j, b)));
        }
        let mut x = self.zero();
        x[b] = ScalarMatrix::unit(blk.size, i, j);
        Ok(x)
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if x.len() != self.blocks.len()
            || x.iter().zip(&self.blocks).any(|(m, b)| m.rows() != b.size || m.cols() != b.size)
        {
            return Err(Error::ShapeMismatch("element does not match the block sizes".into()));
        }
        Ok(())
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        x.iter().zip(y).map(|(a, b)| a.mul(b)).collect()
    }

    pub fn adjoint(&self, x: &Element) -> Element {
        x.iter().map(|m| m.adjoint()).collect()
    }
}

/// The antilinear involution `σ(x)_{perm[b]} = K_b conj(x_b) K_b*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaAut {
    pub perm: Vec<usize>,
    pub conjugators: Vec<ScalarMatrix>,
}

impl SigmaAut {
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.len() != self.perm.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks given, {} expected",
                x.len(),
                self.perm.len()
            )));
        }
        let mut out: Vec<Option<ScalarMatrix>> = vec![None; x.len()];
        for (b, m) in x.iter().enumerate() {
            let k = &self.conjugators[b];
            if m.rows() != k.rows() || m.cols() != k.cols() {
                return Err(Error::ShapeMismatch(format!("block {} has the wrong size", b)));
            }
            let img = k.mul(&m.conj())?.mul(&k.adjoint())?;
            out[self.perm[b]] = Some(img);
        }
        Ok(out.into_iter().map(|m| m.expect("perm is a permutation")).collect())
    }

    /// `σ(e^b_ij)` as `(target block, matrix)`.
    pub fn on_unit(&self, b: usize, i: usize, j: usize) -> (usize, ScalarMatrix) {
        let k = &self.conjugators[b];
        let e = ScalarMatrix::unit(k.rows(), i, j);
        let img = k.mul(&e).and_then(|m| m.mul(&k.adjoint())).expect("square blocks");
        (self.perm[b], img)
    }
}

/// Complexification per block: `M_n(R) -> M_n(C)` with entrywise
/// conjugation, `M_n(C) -> M_n(C) ⊕ M_n(C)` with swap and conjugation,
/// `M_n(H) -> M_2n(C)` with conjugation twisted by `σ₂ ⊗ 1_n`.
pub fn complexify(spec: &RealCStarSpec) -> (ComplexifiedAlgebra, SigmaAut) {
    let mut blocks = Vec::new();
    let mut perm = Vec::new();
    let mut conjugators = Vec::new();
    for (k, b) in spec.blocks.iter().enumerate() {
        let here = blocks.len();
        match b.ring {
            DivRing::R => {
                blocks.push(ComplexBlock { size: b.n, origin: k, copy: 0 });
                perm.push(here);
                conjugators.push(ScalarMatrix::identity(b.n));
            }
            DivRing::C => {
                blocks.push(ComplexBlock { size: b.n, origin: k, copy: 0 });
                blocks.push(ComplexBlock { size: b.n, origin: k, copy: 1 });
                perm.extend([here + 1, here]);
                conjugators.extend([ScalarMatrix::identity(b.n), ScalarMatrix::identity(b.n)]);
            }
            DivRing::H => {
                blocks.push(ComplexBlock { size: 2 * b.n, origin: k, copy: 0 });
                perm.push(here);
                conjugators.push(ScalarMatrix::sigma2().kron(&ScalarMatrix::identity(b.n)));
            }
        }
    }
    (ComplexifiedAlgebra { blocks }, SigmaAut { perm, conjugators })
}

/// `σ` applied to an element given blockwise.
pub fn sigma_apply(x: &Element, sigma: &SigmaAut) -> Result<Element> {
    sigma.apply(x)
}

/// Block-diagonal density matrix `R` defining `φ_R(a) = Tr(R a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpec {
    pub blocks: Vec<ScalarMatrix>,
}

impl StateSpec {
    pub fn new(blocks: Vec<ScalarMatrix>) -> Result<Self> {
        for (k, b) in blocks.iter().enumerate() {
            if !b.is_square() {
                return Err(Error::ShapeMismatch(format!("R block {} is not square", k)));
            }
            if b.det()?.is_zero() {
                return Err(Error::Singular(format!("R block {}", k)));
            }
        }
        Ok(StateSpec { blocks })
    }

    /// The trace, `R = 1` on every block.
    pub fn trace(alg: &ComplexifiedAlgebra) -> Self {
        StateSpec { blocks: alg.blocks.iter().map(|b| ScalarMatrix::identity(b.size)).collect() }
    }

    pub fn check_against(&self, alg: &ComplexifiedAlgebra) -> Result<()> {
        if self.blocks.len() != alg.blocks.len()
            || self.blocks.iter().zip(&alg.blocks).any(|(r, b)| r.rows() != b.size)
        {
            return Err(Error::BlockMismatch(format!(
                "R has blocks {:?}, algebra has {:?}",
                self.blocks.iter().map(|r| r.rows()).collect::<Vec<_>>(),
                alg.sizes()
            )));
        }
        Ok(())
    }
}

/// `φ_R(e^b_ij) = (R_b)_{ji}`.
pub fn state_value(b: usize, i: usize, j: usize, r: &StateSpec) -> Result<Scalar> {
    let m = r
        .blocks
        .get(b)
        .ok_or_else(|| Error::IndexOutOfRange(format!("block {}", b)))?;
    if i >= m.rows() || j >= m.cols() {
        return Err(Error::IndexOutOfRange(format!("e[{},{}] in block {}", i, j, b)));
    }
    Ok(m.get(j, i).clone())
}

/// The embedding of a quaternion `α + β j` as `[[α, β], [-β̄, ᾱ]]`.
pub fn quaternion(alpha: &Scalar, beta: &Scalar) -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(2, 2);
    m.set(0, 0, alpha.clone());
    m.set(0, 1, beta.clone());
    m.set(1, 0, -beta.conj());
    m.set(1, 1, alpha.conj());
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_spec() {
        let s: RealCStarSpec = "A = R(2) + H(1) + C(3)".parse().unwrap();
        assert_eq!(s.to_string(), "R(2) + H(1) + C(3)");
        assert_eq!(s.real_dim(), 4 + 4 + 18);
        let e = "R(2)+X(1)".parse::<RealCStarSpec>().unwrap_err();
        assert_eq!(e, Error::Parse { col: 6, msg: "expected R, C or H: 'X(1)'".into() });
        assert!("C3(3)".parse::<RealCStarSpec>().is_err());
    }

    #[test]
    fn complexified_sizes() {
        let s: RealCStarSpec = "C(1)+H(1)+C(3)".parse().unwrap();
        let (alg, sigma) = s.complexify();
        assert_eq!(alg.sizes(), vec![1, 1, 2, 3, 3]);
        assert_eq!(sigma.perm, vec![1, 0, 2, 4, 3]);
        assert_eq!(alg.dim(), s.real_dim());
    }

    #[test]
    fn quaternion_sigma_moves_e11_to_e22() {
        let (alg, sigma) = RealCStarSpec::single(DivRing::H, 1).unwrap().complexify();
        let x = alg.unit(0, 0, 0).unwrap();
        assert_eq!(sigma.apply(&x).unwrap(), alg.unit(0, 1, 1).unwrap());
        let q = quaternion(&Scalar::from_frac(1, 2), &(Scalar::i() + Scalar::from_int(3)));
        assert_eq!(sigma.apply(&vec![q.clone()]).unwrap(), vec![q]);
    }

    #[test]
    fn sigma_is_an_involution_on_units() {
        let s: RealCStarSpec = "C(1)+H(1)+C(3)".parse().unwrap();
        let (alg, sigma) = s.complexify();
        for (b, i, j) in alg.basis() {
            let x = alg.unit(b, i, j).unwrap();
            let y = sigma.apply(&x).unwrap();
            assert_eq!(sigma.apply(&y).unwrap(), x);
        }
    }

    #[test]
    fn state_reads_transposed_entry() {
        let r = StateSpec::new(vec![ScalarMatrix::from_ints(&[&[1, 2], &[3, 4]])]).unwrap();
        assert_eq!(state_value(0, 0, 1, &r).unwrap(), Scalar::from_int(3));
        assert!(matches!(state_value(0, 2, 0, &r), Err(Error::IndexOutOfRange(_))));
        let id = StateSpec::new(vec![ScalarMatrix::identity(2)]).unwrap();
        assert!(state_value(0, 0, 0, &id).unwrap().is_one());
        assert!(state_value(0, 0, 1, &id).unwrap().is_zero());
    }
}
