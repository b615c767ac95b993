//! Line-oriented text form of a finite spectral triple.
//!
//! ```text
//! finite-spectral-triple v1
//! name: eym-c(1)
//! algebra: C(1)
//! dim: 1
//! epsilon: 1
//! kernel: circle
//! pi 1 1 1: 1,1=1
//! j0: 1,1=1
//! end
//! ```
//!
//! `pi b i j` lines are 1-based and list only units with a nonzero image.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{FiniteSpectralTriple, KernelClass, SparseMatrix};
use crate::error::{Error, Result};

pub const TRIPLE_HEADER: &str = "finite-spectral-triple v1";

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { col: 1, msg: format!("line {}: {}", line, msg.into()) }
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { msg, .. } => err(line, msg),
        other => err(line, other.to_string()),
    }
}

impl fmt::Display for FiniteSpectralTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", TRIPLE_HEADER)?;
        writeln!(f, "name: {}", self.name())?;
        writeln!(f, "algebra: {}", self.spec())?;
        writeln!(f, "dim: {}", self.dim())?;
        writeln!(f, "epsilon: {}", self.epsilon())?;
        let kernel = match self.kernel() {
            Some(KernelClass::Circle) => "circle",
            Some(KernelClass::Signs) => "signs",
            None => "none",
        };
        writeln!(f, "kernel: {}", kernel)?;
        for (&(b, i, j), m) in self.images() {
            if !m.is_zero() {
                writeln!(f, "pi {} {} {}: {}", b + 1, i + 1, j + 1, m)?;
            }
        }
        writeln!(f, "j0: {}", self.j0())?;
        writeln!(f, "end")
    }
}

impl FromStr for FiniteSpectralTriple {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim_end())).filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| lines.next().ok_or_else(|| err(0, format!("missing {}", what)));
        let (n, head) = next("header")?;
        if head != TRIPLE_HEADER {
            return Err(err(n, format!("expected '{}'", TRIPLE_HEADER)));
        }
        let field = |(n, l): (usize, &str), key: &str| -> Result<(usize, String)> {
            l.strip_prefix(key)
                .and_then(|r| r.strip_prefix(':'))
                .map(|r| (n, r.trim().to_string()))
                .ok_or_else(|| err(n, format!("expected '{}: ...'", key)))
        };
        let (_, name) = field(next("name")?, "name")?;
        let (n, alg) = field(next("algebra")?, "algebra")?;
        let spec = alg.parse().map_err(|e| located(n, e))?;
        let (n, dim) = field(next("dim")?, "dim")?;
        let dim: usize = dim.parse().ok().filter(|&d| d > 0).ok_or_else(|| err(n, "dim must be a positive integer"))?;
        let (n, eps) = field(next("epsilon")?, "epsilon")?;
        let epsilon = match eps.as_str() {
            "1" => 1,
            "-1" => -1,
            _ => return Err(err(n, "epsilon must be 1 or -1")),
        };
        let (n, kernel) = field(next("kernel")?, "kernel")?;
        let kernel = match kernel.as_str() {
            "circle" => Some(KernelClass::Circle),
            "signs" => Some(KernelClass::Signs),
            "none" => None,
            _ => return Err(err(n, "kernel must be circle, signs or none")),
        };
        let mut pi = BTreeMap::new();
        let j0 = loop {
            let (n, line) = next("j0")?;
            if let Some(rest) = line.strip_prefix("j0:") {
                break SparseMatrix::parse(dim, rest).map_err(|e| located(n, e))?;
            }
            let (key, body) = line
                .strip_prefix("pi ")
                .and_then(|r| r.split_once(':'))
                .ok_or_else(|| err(n, "expected 'pi b i j: ...' or 'j0: ...'"))?;
            let idx: Vec<usize> = key
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().filter(|&k| k > 0).map(|k| k - 1))
                .collect::<Option<_>>()
                .filter(|v: &Vec<usize>| v.len() == 3)
                .ok_or_else(|| err(n, format!("bad unit '{}'", key.trim())))?;
            let unit = (idx[0], idx[1], idx[2]);
            let m = SparseMatrix::parse(dim, body).map_err(|e| located(n, e))?;
            if pi.insert(unit, m).is_some() {
                return Err(err(n, format!("unit '{}' given twice", key.trim())));
            }
        };
        let (n, end) = next("end")?;
        if end != "end" {
            return Err(err(n, "expected 'end'"));
        }
        if let Some((n, _)) = lines.next() {
            return Err(err(n, "trailing text after 'end'"));
        }
        FiniteSpectralTriple::new(name, spec, dim, pi, j0, epsilon, kernel)
    }
}
