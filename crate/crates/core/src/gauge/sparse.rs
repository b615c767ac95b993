use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Scalar, ScalarMatrix};

/// A square matrix of scalars keyed by position; zero entries are absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    n: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zeros(n: usize) -> Self {
        SparseMatrix { n, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix::from_entries(n, (0..n).map(|i| (i, i, Scalar::one())))
    }

    /// The matrix unit `e_ij`, 0-based.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        SparseMatrix::from_entries(n, [(i, j, Scalar::one())])
    }

    /// Sums repeated positions and drops zeros. Panics on an out-of-range index.
    pub fn from_entries(n: usize, it: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut m = SparseMatrix::zeros(n);
        for (i, j, c) in it {
            m.add_at(i, j, &c);
        }
        m
    }

    pub fn from_dense(m: &ScalarMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        Ok(SparseMatrix::from_entries(
            m.rows(),
            m.entries().filter(|(_, _, c)| !c.is_zero()).map(|(i, j, c)| (i, j, c.clone())),
        ))
    }

    pub fn to_dense(&self) -> ScalarMatrix {
        let mut out = ScalarMatrix::zeros(self.n, self.n);
        for (&(i, j), c) in &self.entries {
            out.set(i, j, c.clone());
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), c)| (i, j, c))
    }

    fn add_at(&mut self, i: usize, j: usize, c: &Scalar) {
        assert!(i < self.n && j < self.n, "index ({}, {}) out of range for {}", i, j, self.n);
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    fn same_size(&self, o: &SparseMatrix) -> Result<()> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("{} against {}", self.n, o.n)));
        }
        Ok(())
    }

    pub fn add(&self, o: &SparseMatrix) -> Result<SparseMatrix> {
        self.same_size(o)?;
        let mut out = self.clone();
        for (i, j, c) in o.entries() {
            out.add_at(i, j, c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &SparseMatrix) -> Result<SparseMatrix> {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix::from_entries(self.n, self.entries().map(|(i, j, x)| (i, j, x * c)))
    }

    pub fn mul(&self, o: &SparseMatrix) -> Result<SparseMatrix> {
        self.same_size(o)?;
        let mut rows: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); self.n];
        for (k, j, c) in o.entries() {
            rows[k].push((j, c));
        }
        let mut out = SparseMatrix::zeros(self.n);
        for (i, k, a) in self.entries() {
            for &(j, b) in &rows[k] {
                out.add_at(i, j, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn conj(&self) -> SparseMatrix {
        SparseMatrix::from_entries(self.n, self.entries().map(|(i, j, c)| (i, j, c.conj())))
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_entries(self.n, self.entries().map(|(i, j, c)| (j, i, c.clone())))
    }

    pub fn adjoint(&self) -> SparseMatrix {
        SparseMatrix::from_entries(self.n, self.entries().map(|(i, j, c)| (j, i, c.conj())))
    }

    /// Kronecker product; the left factor is the outer index.
    pub fn kron(&self, o: &SparseMatrix) -> SparseMatrix {
        let n = self.n * o.n;
        let mut out = SparseMatrix::zeros(n);
        for (i, j, a) in self.entries() {
            for (k, l, b) in o.entries() {
                out.entries.insert((i * o.n + k, j * o.n + l), a * b);
            }
        }
        out
    }

    /// Kronecker product of a list of factors, outermost first.
    pub fn kron_all(factors: &[SparseMatrix]) -> SparseMatrix {
        factors.iter().fold(SparseMatrix::identity(1), |acc, f| acc.kron(f))
    }

    pub fn commutes_with(&self, o: &SparseMatrix) -> Result<bool> {
        Ok(self.mul(o)? == o.mul(self)?)
    }
}

/// `(r,c)=value` pairs, 1-based, separated by `; `.
impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.entries().map(|(i, j, c)| format!("{},{}={}", i + 1, j + 1, c)).collect();
        f.write_str(&parts.join("; "))
    }
}

impl SparseMatrix {
    /// Inverse of the `Display` form for an `n x n` matrix; the empty string
    /// is the zero matrix.
    pub fn parse(n: usize, text: &str) -> Result<SparseMatrix> {
        let bad = |msg: String| Error::Parse { col: 1, msg };
        let mut m = SparseMatrix::zeros(n);
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (pos, val) =
                part.split_once('=').ok_or_else(|| bad(format!("expected 'r,c=value' in '{}'", part)))?;
            let (r, c) =
                pos.split_once(',').ok_or_else(|| bad(format!("expected 'r,c' in '{}'", pos)))?;
            let idx = |t: &str| -> Result<usize> {
                match t.trim().parse::<usize>() {
                    Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                    _ => Err(bad(format!("index '{}' not in 1..={}", t.trim(), n))),
                }
            };
            let (r, c) = (idx(r)?, idx(c)?);
            if m.entries.contains_key(&(r, c)) {
                return Err(bad(format!("entry {},{} given twice", r + 1, c + 1)));
            }
            m.add_at(r, c, &val.trim().parse::<Scalar>()?);
        }
        Ok(m)
    }
}
