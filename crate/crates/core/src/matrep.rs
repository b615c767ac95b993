//! Matrices over the free *-algebra and the passage from matrix identities
//! to relation lists.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::freestar::{Gen, NCPoly};
use crate::scalars::{Scalar, ScalarMatrix};

/// Matrices up to this size are stored densely.
pub const DENSE_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    Dense(Vec<NCPoly>),
    Sparse(BTreeMap<(usize, usize), NCPoly>),
}

/// A `rows x cols` matrix of noncommutative polynomials.
#[derive(Clone, Debug)]
pub struct GenMatrix {
    rows: usize,
    cols: usize,
    data: Storage,
}

/// Which involution-flavoured rearrangement to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    /// `(M*)_{ij} = star(M_{ji})`
    Adjoint,
    /// `(M̄)_{ij} = star(M_{ij})`
    Bar,
    /// `(Mᵗ)_{ij} = M_{ji}`
    Transpose,
}

impl GenMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let data = if rows <= DENSE_LIMIT && cols <= DENSE_LIMIT {
            Storage::Dense(vec![NCPoly::zero(); rows * cols])
        } else {
            Storage::Sparse(BTreeMap::new())
        };
        GenMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GenMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, NCPoly::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> NCPoly) -> Self {
        let mut m = GenMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// The matrix of generators `u[b:i,j]` (block 0 means unnamed).
    pub fn generic(n: usize, block: usize) -> Self {
        GenMatrix::from_fn(n, n, |i, j| NCPoly::gen(Gen::ub(block, i + 1, j + 1)))
    }

    pub fn from_scalar(m: &ScalarMatrix) -> Self {
        let mut out = GenMatrix::zeros(m.rows(), m.cols());
        for (i, j, c) in m.entries() {
            out.set(i, j, NCPoly::constant(c.clone()));
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.data, Storage::Sparse(_))
    }

    pub fn get(&self, i: usize, j: usize) -> NCPoly {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.data {
            Storage::Dense(v) => v[i * self.cols + j].clone(),
            Storage::Sparse(m) => m.get(&(i, j)).cloned().unwrap_or_default(),
        }
    }

    pub fn get_ref(&self, i: usize, j: usize) -> Option<&NCPoly> {
        match &self.data {
            Storage::Dense(v) => Some(&v[i * self.cols + j]).filter(|p| !p.is_zero()),
            Storage::Sparse(m) => m.get(&(i, j)),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, p: NCPoly) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let cols = self.cols;
        match &mut self.data {
            Storage::Dense(v) => v[i * cols + j] = p,
            Storage::Sparse(m) => {
                if p.is_zero() {
                    m.remove(&(i, j));
                } else {
                    m.insert((i, j), p);
                }
            }
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, &NCPoly)> {
        match &self.data {
            Storage::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(k, p)| (k / self.cols, k % self.cols, p))
                .collect(),
            Storage::Sparse(m) => m.iter().map(|(&(i, j), p)| (i, j, p)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries().is_empty()
    }

    fn rows_index(&self) -> Vec<Vec<(usize, &NCPoly)>> {
        let mut r = vec![Vec::new(); self.rows];
        for (i, j, p) in self.entries() {
            r[i].push((j, p));
        }
        r
    }

    pub fn mul(&self, o: &GenMatrix) -> Result<GenMatrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let right = o.rows_index();
        let mut acc: BTreeMap<(usize, usize), NCPoly> = BTreeMap::new();
        for (i, k, a) in self.entries() {
            for &(j, b) in &right[k] {
                acc.entry((i, j)).or_default().add_assign(&a.mul(b));
            }
        }
        let mut out = GenMatrix::zeros(self.rows, o.cols);
        for ((i, j), p) in acc {
            out.set(i, j, p);
        }
        Ok(out)
    }

    pub fn add(&self, o: &GenMatrix) -> Result<GenMatrix> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (i, j, p) in o.entries() {
            let s = out.get(i, j).add(p);
            out.set(i, j, s);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &GenMatrix) -> Result<GenMatrix> {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> GenMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn map(&self, mut f: impl FnMut(&NCPoly) -> NCPoly) -> GenMatrix {
        let mut out = GenMatrix::zeros(self.rows, self.cols);
        for (i, j, p) in self.entries() {
            out.set(i, j, f(p));
        }
        out
    }

    fn same_shape(&self, o: &GenMatrix) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn twist(&self, mode: Twist) -> GenMatrix {
        match mode {
            Twist::Bar => self.map(|p| p.star()),
            Twist::Transpose | Twist::Adjoint => {
                let mut out = GenMatrix::zeros(self.cols, self.rows);
                for (i, j, p) in self.entries() {
                    let v = if mode == Twist::Adjoint { p.star() } else { p.clone() };
                    out.set(j, i, v);
                }
                out
            }
        }
    }

    pub fn adjoint(&self) -> GenMatrix {
        self.twist(Twist::Adjoint)
    }

    pub fn bar(&self) -> GenMatrix {
        self.twist(Twist::Bar)
    }

    pub fn transpose(&self) -> GenMatrix {
        self.twist(Twist::Transpose)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &GenMatrix) -> GenMatrix {
        let mut out = GenMatrix::zeros(self.rows + o.rows, self.cols + o.cols);
        for (i, j, p) in self.entries() {
            out.set(i, j, p.clone());
        }
        for (i, j, p) in o.entries() {
            out.set(self.rows + i, self.cols + j, p.clone());
        }
        out
    }

    /// Applies an algebra map to every entry.
    pub fn substitute(&self, f: &mut impl FnMut(Gen) -> NCPoly) -> GenMatrix {
        self.map(|p| p.substitute(f))
    }

    /// Converts back to a scalar matrix when every entry is a constant.
    pub fn to_scalar(&self) -> Option<ScalarMatrix> {
        let mut m = ScalarMatrix::zeros(self.rows, self.cols);
        for (i, j, p) in self.entries() {
            if p.degree() > 0 {
                return None;
            }
            m.set(i, j, p.constant_term());
        }
        Some(m)
    }
}

impl PartialEq for GenMatrix {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.entries() == o.entries()
    }
}

impl Eq for GenMatrix {}

impl fmt::Display for GenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn mat_mul(a: &GenMatrix, b: &GenMatrix) -> Result<GenMatrix> {
    a.mul(b)
}

pub fn twist(m: &GenMatrix, mode: Twist) -> GenMatrix {
    m.twist(mode)
}

/// Entrywise differences `lhs - rhs` in row-major order, zeros dropped.
pub fn relations_from_eq(lhs: &GenMatrix, rhs: &GenMatrix) -> Result<Vec<NCPoly>> {
    lhs.same_shape(rhs)?;
    let mut out = Vec::new();
    for i in 0..lhs.rows {
        for j in 0..lhs.cols {
            let d = lhs.get(i, j).sub(&rhs.get(i, j));
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Keeps the first occurrence of each relation up to a nonzero scalar factor.
pub fn dedup_relations(rels: impl IntoIterator<Item = NCPoly>) -> Vec<NCPoly> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rels {
        if r.is_zero() {
            continue;
        }
        if seen.insert(r.monic()) {
            out.push(r);
        }
    }
    out
}
