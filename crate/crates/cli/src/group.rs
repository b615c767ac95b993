//! Group expressions used by `group`, `source` and `target`:
//!
//! - `au(n)`, `au(n; R)`, `ao(n)`, `ao(n; F)`, `asp(n)`, `austar(n)`, `as(n)`,
//!   `suq(n)`, `aaut(n)`, `qiso(n)`
//! - `aaut-real(SPEC)`, `qunitary-real(SPEC)`, `qunitary-real(SPEC; F1; F2 ...)`
//! - `abelian(G)`, `elim(G)` wrap another expression
//! - `file(PATH)` reads a serialized presentation

use cqgalg::cqg::*;
use cqgalg::{Error, RealCStarSpec, Result, ScalarMatrix};

use crate::job::MatrixList;

/// Named shortcuts for `preset`.
pub const PRESETS: &[(&str, &str)] = &[
    ("aaut-real-R2", "aaut-real(R(2))"),
    ("aaut-real-H1", "aaut-real(H(1))"),
    ("aaut-real-C2", "aaut-real(C(2))"),
    ("suq2", "suq(2)"),
    ("ao2", "ao(2)"),
    ("au2", "au(2)"),
];

pub fn preset(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| *g)
        .ok_or_else(|| Error::UnknownName(format!("preset '{}'", name)))
}

fn bad(text: &str, msg: &str) -> Error {
    Error::Parse { col: 1, msg: format!("{} in group '{}'", msg, text) }
}

/// Splits `name(args)` into the name and the argument text.
fn call(text: &str) -> Result<(&str, &str)> {
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| bad(text, "expected 'name(...)'"))?;
    let inner = text[open + 1..].strip_suffix(')').ok_or_else(|| bad(text, "expected ')'"))?;
    Ok((text[..open].trim(), inner))
}

fn size(text: &str, arg: &str) -> Result<usize> {
    arg.trim().parse().map_err(|_| bad(text, "expected a size"))
}

fn one_matrix(text: &str, arg: Option<&str>, n: usize) -> Result<ScalarMatrix> {
    match arg {
        None => Ok(ScalarMatrix::identity(n)),
        Some(m) => match MatrixList::parse(m).map_err(|(_, msg)| bad(text, &msg))? {
            MatrixList::Identity => Ok(ScalarMatrix::identity(n)),
            MatrixList::Blocks(ms) if ms.len() == 1 => Ok(ms.into_iter().next().unwrap()),
            MatrixList::Blocks(_) => Err(bad(text, "expected one matrix")),
        },
    }
}

pub fn parse_spec(text: &str) -> Result<RealCStarSpec> {
    text.trim().parse()
}

/// Sizes of the complexified blocks of a real algebra.
pub fn complex_sizes(spec: &RealCStarSpec) -> Vec<usize> {
    cqgalg::fdalg::complexify(spec).0.sizes()
}

/// Builds the presentation named by a group expression.
pub fn build(text: &str) -> Result<CQGPresentation> {
    let (name, inner) = call(text)?;
    let args: Vec<&str> = inner.split(';').map(str::trim).collect();
    let n = || size(text, args[0]);
    match name {
        "au" => {
            let n = n()?;
            make_au(n, &one_matrix(text, args.get(1).copied(), n)?)
        }
        "ao" => {
            let n = n()?;
            make_ao(n, &one_matrix(text, args.get(1).copied(), n)?)
        }
        "asp" => make_asp(n()?),
        "austar" => make_austar(n()?),
        "as" => make_as(n()?),
        "suq" => make_suq(n()?),
        "aaut" => make_aaut(n()?),
        "qiso" => cqgalg::gauge::qiso_presentation(n()?),
        "aaut-real" => make_aaut_real(&parse_spec(inner)?),
        "qunitary-real" => {
            let spec = parse_spec(args[0])?;
            let f = if args.len() == 1 {
                MatrixList::Identity
            } else {
                MatrixList::parse(&args[1..].join(";")).map_err(|(_, msg)| bad(text, &msg))?
            };
            quantum_unitary_real(&spec, &f.resolve(&complex_sizes(&spec))?)
        }
        "abelian" => abelianize(&build(inner)?),
        "elim" => Ok(build(inner)?.eliminated()?.0),
        "file" => {
            let body = std::fs::read_to_string(inner.trim())
                .map_err(|e| bad(text, &format!("cannot read file: {}", e)))?;
            body.parse()
        }
        _ => Err(Error::UnknownName(format!("group family '{}'", name))),
    }
}
