//! Job files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! command = qunitary-real
//! algebra = H(1)
//! F = [[s, 0], [0, 1/s]]
//! k = 2
//! ```
//!
//! Matrix lists separate blocks with `;`. `identity` stands for the
//! identity on every block. `map` and `relation` may repeat.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cqgalg::ScalarMatrix;

/// A diagnostic pointing into the job text (1-based line and column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for JobError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Qunitary,
    QunitaryReal,
    Qgauge,
    Qaut,
    QautReal,
    Abelianize,
    Projective,
    HomCheck,
    WoroCheck,
    CommutativeCheck,
    TraceCheck,
    Qiso,
    ClassicalCheck,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Qunitary,
        Command::QunitaryReal,
        Command::Qgauge,
        Command::Qaut,
        Command::QautReal,
        Command::Abelianize,
        Command::Projective,
        Command::HomCheck,
        Command::WoroCheck,
        Command::CommutativeCheck,
        Command::TraceCheck,
        Command::Qiso,
        Command::ClassicalCheck,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Qunitary => "qunitary",
            Command::QunitaryReal => "qunitary-real",
            Command::Qgauge => "qgauge",
            Command::Qaut => "qaut",
            Command::QautReal => "qaut-real",
            Command::Abelianize => "abelianize",
            Command::Projective => "projective",
            Command::HomCheck => "hom-check",
            Command::WoroCheck => "woro-check",
            Command::CommutativeCheck => "commutative-check",
            Command::TraceCheck => "trace-check",
            Command::Qiso => "qiso",
            Command::ClassicalCheck => "classical-check",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command '{}'", s))
    }
}

/// Per-block matrices, or the identity on every block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixList {
    Identity,
    Blocks(Vec<ScalarMatrix>),
}

impl MatrixList {
    /// Parses `identity` or `[[..]] ; [[..]]`. Errors carry a 1-based
    /// column inside `text`.
    pub fn parse(text: &str) -> Result<MatrixList, (usize, String)> {
        if text.trim() == "identity" {
            return Ok(MatrixList::Identity);
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for piece in text.split(';') {
            let lead = piece.len() - piece.trim_start().len();
            let m = ScalarMatrix::parse(piece.trim()).map_err(|e| match e {
                cqgalg::Error::Parse { col, msg } => (offset + lead + col, msg),
                other => (offset + lead + 1, other.to_string()),
            })?;
            out.push(m);
            offset += piece.len() + 1;
        }
        Ok(MatrixList::Blocks(out))
    }

    /// The matrices for blocks of the given sizes.
    pub fn resolve(&self, sizes: &[usize]) -> cqgalg::Result<Vec<ScalarMatrix>> {
        match self {
            MatrixList::Identity => Ok(sizes.iter().map(|&n| ScalarMatrix::identity(n)).collect()),
            MatrixList::Blocks(ms) => {
                if ms.len() != sizes.len() {
                    return Err(cqgalg::Error::BlockMismatch(format!(
                        "{} matrices given for {} blocks",
                        ms.len(),
                        sizes.len()
                    )));
                }
                Ok(ms.clone())
            }
        }
    }
}

impl fmt::Display for MatrixList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixList::Identity => f.write_str("identity"),
            MatrixList::Blocks(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                f.write_str(&parts.join("; "))
            }
        }
    }
}

/// Everything a run needs; unset fields fall back to per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JobConfig {
    pub command: Option<Command>,
    pub algebra: Option<String>,
    pub r: Option<MatrixList>,
    pub f: Option<MatrixList>,
    pub b: Option<ScalarMatrix>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    /// Cap on the degree of each product `w1 r w2`.
    pub max_degree: Option<usize>,
    pub budget: Option<usize>,
    pub group: Option<String>,
    pub source: Option<String>,
    pub target: Option<String>,
    pub preset: Option<String>,
    pub triple: Option<String>,
    pub ideal: Option<String>,
    pub map: Vec<(String, String)>,
    pub relations: Vec<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub presentation_out: Option<PathBuf>,
}

pub const KEYS: &[&str] = &[
    "command",
    "algebra",
    "R",
    "F",
    "B",
    "n",
    "k",
    "D",
    "budget",
    "group",
    "source",
    "target",
    "preset",
    "triple",
    "ideal",
    "map",
    "relation",
    "seed",
    "samples",
    "out",
    "presentation",
];

fn number<T: FromStr>(v: &str, col: usize, what: &str) -> Result<T, (usize, String)> {
    v.parse().map_err(|_| (col, format!("{} must be a non-negative integer", what)))
}

impl JobConfig {
    /// Parses job text, rejecting unknown or repeated keys.
    pub fn parse(text: &str) -> Result<JobConfig, JobError> {
        let mut cfg = JobConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let key_col = body.len() - body.trim_start().len() + 1;
            let eq = body.find('=').ok_or_else(|| JobError {
                line,
                col: key_col,
                msg: "expected 'key = value'".into(),
            })?;
            let key = body[..eq].trim();
            let rest = &body[eq + 1..];
            let value = rest.trim();
            // an empty value is reported just after the '='
            let value_col = eq + 2 + if value.is_empty() { 0 } else { rest.len() - rest.trim_start().len() };
            if !KEYS.contains(&key) {
                return Err(JobError { line, col: key_col, msg: format!("unknown key '{}'", key) });
            }
            if key != "map" && key != "relation" && !seen.insert(key.to_string()) {
                return Err(JobError { line, col: key_col, msg: format!("key '{}' given twice", key) });
            }
            if value.is_empty() {
                return Err(JobError { line, col: value_col, msg: format!("empty value for '{}'", key) });
            }
            cfg.set(key, value).map_err(|(c, msg)| JobError { line, col: value_col + c - 1, msg })?;
        }
        Ok(cfg)
    }

    /// Sets one key; errors carry a 1-based column inside `value`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), (usize, String)> {
        let text = || Some(value.to_string());
        match key {
            "command" => self.command = Some(value.parse().map_err(|e| (1, e))?),
            "algebra" => self.algebra = text(),
            "R" => self.r = Some(MatrixList::parse(value)?),
            "F" => self.f = Some(MatrixList::parse(value)?),
            "B" => {
                self.b = Some(ScalarMatrix::parse(value).map_err(|e| match e {
                    cqgalg::Error::Parse { col, msg } => (col, msg),
                    other => (1, other.to_string()),
                })?)
            }
            "n" => self.n = Some(number(value, 1, "n")?),
            "k" => self.k = Some(number(value, 1, "k")?),
            "D" => self.max_degree = Some(number(value, 1, "D")?),
            "budget" => self.budget = Some(number(value, 1, "budget")?),
            "group" => self.group = text(),
            "source" => self.source = text(),
            "target" => self.target = text(),
            "preset" => self.preset = text(),
            "triple" => self.triple = text(),
            "ideal" => self.ideal = text(),
            "map" => {
                let (g, p) = value
                    .split_once("->")
                    .ok_or_else(|| (1, "expected 'generator -> polynomial'".to_string()))?;
                self.map.push((g.trim().to_string(), p.trim().to_string()));
            }
            "relation" => self.relations.push(value.to_string()),
            "seed" => self.seed = Some(number(value, 1, "seed")?),
            "samples" => self.samples = Some(number(value, 1, "samples")?),
            "out" => self.out = Some(PathBuf::from(value)),
            "presentation" => self.presentation_out = Some(PathBuf::from(value)),
            other => return Err((1, format!("unknown key '{}'", other))),
        }
        Ok(())
    }

    /// Fields set in `over` replace those here; repeated keys accumulate.
    pub fn merge(mut self, over: JobConfig) -> JobConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            command, algebra, r, f, b, n, k, max_degree, budget, group, source, target, preset, triple,
            ideal, seed, samples, out, presentation_out
        );
        self.map.extend(over.map);
        self.relations.extend(over.relations);
        self
    }
}
