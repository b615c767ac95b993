//! Versioned text form of a presentation:
//!
//! ```text
//! cqg-presentation v1
//! name: A_o(2)
//! tags: kac
//! self-adjoint: none
//! block 0 2
//! u[1,1] | u[1,2]
//! u[2,1] | u[2,2]
//! relations 20
//! (1)*u[1,1].u*[1,1] + ...
//! end
//! ```
//!
//! Entries and relations are canonical polynomial text; relations appear in
//! the canonical order of the relation set.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{Block, CQGPresentation, Tags};
use crate::error::{Error, Result};
use crate::freestar::{Gen, NCPoly};
use crate::ideal::RelationSet;
use crate::matrep::GenMatrix;

pub const FORMAT_HEADER: &str = "cqg-presentation v1";

impl fmt::Display for CQGPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", FORMAT_HEADER)?;
        writeln!(f, "name: {}", self.name)?;
        let mut tags = Vec::new();
        if self.tags.kac {
            tags.push("kac");
        }
        if self.tags.commutative_claimed {
            tags.push("commutative-claimed");
        }
        writeln!(f, "tags: {}", if tags.is_empty() { "none".into() } else { tags.join(", ") })?;
        let sa: Vec<String> = self.self_adjoint().iter().map(|g| g.to_string()).collect();
        writeln!(f, "self-adjoint: {}", if sa.is_empty() { "none".into() } else { sa.join(" ") })?;
        for b in &self.blocks {
            let m = &b.matrix;
            writeln!(f, "block {} {}", b.label, m.rows())?;
            for i in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
                writeln!(f, "{}", row.join(" | "))?;
            }
        }
        writeln!(f, "relations {}", self.relations.len())?;
        for r in self.relations.iter() {
            writeln!(f, "{}", r)?;
        }
        writeln!(f, "end")
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { col: 1, msg: format!("line {}: {}", line, msg.into()) }
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { col, msg } => Error::Parse { col, msg: format!("line {}: {}", line, msg) },
        other => other,
    }
}

impl FromStr for CQGPresentation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim_end()));
        let mut next = |what: &str| lines.next().ok_or_else(|| err(0, format!("missing {}", what)));
        let (n, head) = next("header")?;
        if head != FORMAT_HEADER {
            return Err(err(n, format!("expected '{}'", FORMAT_HEADER)));
        }
        let field = |(n, l): (usize, &str), key: &str| -> Result<String> {
            l.strip_prefix(key)
                .and_then(|r| r.strip_prefix(": "))
                .map(str::to_string)
                .ok_or_else(|| err(n, format!("expected '{}: ...'", key)))
        };
        let name = field(next("name")?, "name")?;
        let tl = next("tags")?;
        let mut tags = Tags::default();
        for t in field(tl, "tags")?.split(", ") {
            match t {
                "none" => {}
                "kac" => tags.kac = true,
                "commutative-claimed" => tags.commutative_claimed = true,
                other => return Err(err(tl.0, format!("unknown tag '{}'", other))),
            }
        }
        let sl = next("self-adjoint")?;
        let mut sa = BTreeSet::new();
        for g in field(sl, "self-adjoint")?.split_whitespace() {
            if g != "none" {
                sa.insert(g.parse::<Gen>().map_err(|e| located(sl.0, e))?.plain());
            }
        }
        let mut blocks = Vec::new();
        loop {
            let (n, l) = next("block or relations")?;
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                ["block", label, size] => {
                    let label = label.parse().map_err(|_| err(n, "bad block label"))?;
                    let size: usize = size.parse().map_err(|_| err(n, "bad block size"))?;
                    let mut m = GenMatrix::zeros(size, size);
                    for i in 0..size {
                        let (rn, row) = next("block row")?;
                        let cells: Vec<&str> = row.split(" | ").collect();
                        if cells.len() != size {
                            return Err(err(rn, format!("expected {} entries", size)));
                        }
                        for (j, c) in cells.iter().enumerate() {
                            m.set(i, j, NCPoly::parse(c, &sa).map_err(|e| located(rn, e))?);
                        }
                    }
                    blocks.push(Block { label, matrix: m });
                }
                ["relations", count] => {
                    let count: usize = count.parse().map_err(|_| err(n, "bad relation count"))?;
                    let mut rels = Vec::with_capacity(count);
                    for _ in 0..count {
                        let (rn, l) = next("relation")?;
                        rels.push(NCPoly::parse(l, &sa).map_err(|e| located(rn, e))?);
                    }
                    let (en, end) = next("end")?;
                    if end != "end" {
                        return Err(err(en, "expected 'end'"));
                    }
                    let relations = RelationSet::new(rels);
                    if relations.len() != count {
                        return Err(err(n, "relations are not star-closed and duplicate-free"));
                    }
                    return CQGPresentation::new(name, blocks, relations, tags);
                }
                _ => return Err(err(n, "expected 'block <label> <size>' or 'relations <count>'")),
            }
        }
    }
}
