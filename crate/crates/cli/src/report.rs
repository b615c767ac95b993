//! Deterministic text reports.
//!
//! ```text
//! cqgalg-report v1
//! command: hom-check
//! source: au(2)
//! verdict: pass
//! self-adjoint: none
//! ideal: 16
//!   #0 (1)*u[1,1].u*[1,1] + ...
//! checks: 17
//! check 1: <label>
//!   image: <polynomial>
//!   status: in-ideal depth 1
//!   certificate: 3
//!     (c) | left | #rel | right
//! end
//! ```
//!
//! Certificates are re-expanded before they are printed, and
//! [`verify_report`] re-checks them from the text alone.

use std::collections::BTreeSet;

use cqgalg::cqg::{CheckReport, CQGPresentation, WoronowiczReport};
use cqgalg::ideal::{CommutativityReport, TensorCertificate, TensorMembership};
use cqgalg::{Gen, Membership, MembershipCertificate, NCPoly, RelationSet, Scalar, TensorPoly, Word};

pub const REPORT_HEADER: &str = "cqgalg-report v1";

#[derive(Clone, Debug, Default)]
pub struct Report {
    head: Vec<String>,
    body: Vec<String>,
    passed: bool,
}

fn gens_line(sa: &BTreeSet<Gen>) -> String {
    if sa.is_empty() {
        "none".into()
    } else {
        sa.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn indent<'a>(text: &'a str, by: &str) -> impl Iterator<Item = String> + 'a {
    let by = by.to_string();
    text.lines().map(move |l| format!("{}{}", by, l))
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { head: vec![format!("command: {}", command)], body: Vec::new(), passed: true }
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn fail(&mut self) {
        self.passed = false;
    }

    pub fn require(&mut self, ok: bool) {
        self.passed &= ok;
    }

    /// An input echoed above the verdict.
    pub fn input(&mut self, key: &str, value: impl std::fmt::Display) {
        self.head.push(format!("{}: {}", key, value));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.body.push(text.into());
    }

    pub fn field(&mut self, key: &str, value: impl std::fmt::Display) {
        self.body.push(format!("{}: {}", key, value));
    }

    /// A counted list, or `key: (none)`. Items may span several lines.
    pub fn list(&mut self, key: &str, items: impl IntoIterator<Item = String>) {
        let items: Vec<String> = items.into_iter().collect();
        if items.is_empty() {
            self.field(key, "(none)");
        } else {
            self.field(key, items.len());
            for i in &items {
                self.body.extend(indent(i, "  "));
            }
        }
    }

    pub fn self_adjoint(&mut self, sa: &BTreeSet<Gen>) {
        self.field("self-adjoint", gens_line(sa));
    }

    /// The numbered relations certificates refer to.
    pub fn ideal(&mut self, rels: &RelationSet) {
        let items = rels.iter().enumerate().map(|(i, r)| format!("#{} {}", i, r));
        self.list("ideal", items);
    }

    pub fn presentation(&mut self, p: &CQGPresentation) {
        self.field("name", p.name());
        self.field("blocks", p.blocks().len());
        self.field("generators", p.generators().len());
        let rels = p.relations().iter().map(|r| r.to_string());
        self.list("relations", rels);
        self.line("presentation:");
        let text = p.to_string();
        self.body.extend(indent(&text, "  "));
    }

    fn certificate(&mut self, cert: &MembershipCertificate, rels: &RelationSet, target: &NCPoly, pad: &str) {
        assert!(cert.verifies(rels, target), "certificate does not re-expand to {}", target);
        self.body.push(format!("{}certificate: {}", pad, cert.len()));
        let text = cert.to_string();
        self.body.extend(indent(&text, &format!("{}  ", pad)));
    }

    /// Every query with its image; failing ones are repeated in a
    /// `failing` section.
    pub fn checks(&mut self, report: &CheckReport, rels: &RelationSet) {
        self.require(report.passed());
        self.field("checks", report.items.len());
        for (n, c) in report.items.iter().enumerate() {
            self.line(format!("check {}: {}", n + 1, c.label));
            self.line(format!("  image: {}", c.image));
            match &c.verdict {
                Membership::InIdeal(cert) => {
                    self.line(format!("  status: in-ideal depth {}", c.depth));
                    self.certificate(cert, rels, &c.image, "  ");
                }
                Membership::NotFound => self.line(format!("  status: not-found depth {}", c.depth)),
            }
        }
        self.list("failing", report.failing().map(|c| format!("{}\n  image: {}", c.label, c.image)));
    }

    /// Commutator certificates for every pair of letters.
    pub fn commutators(&mut self, report: &CommutativityReport, rels: &RelationSet) {
        self.require(report.all_commute());
        self.field("pairs", report.pairs);
        self.field("checks", report.certificates.len());
        for (n, ((g, h), cert)) in report.certificates.iter().enumerate() {
            let target = cqgalg::ideal::commutator(&NCPoly::gen(*g), &NCPoly::gen(*h));
            self.line(format!("check {}: [{}, {}]", n + 1, g, h));
            self.line(format!("  image: {}", target));
            self.line(format!("  status: in-ideal depth {}", cert.depth()));
            self.certificate(cert, rels, &target, "  ");
        }
        self.list("failing", report.failing.iter().map(|(g, h)| format!("[{}, {}]", g, h)));
    }

    /// Coproducts of adjoined relations with tensor certificates.
    pub fn tensor_checks(&mut self, report: &WoronowiczReport, rels: &RelationSet) {
        self.require(report.passed());
        self.field("checks", report.items.len());
        for (n, it) in report.items.iter().enumerate() {
            self.line(format!("check {}: {}", n + 1, it.relation));
            self.line(format!("  delta: {}", it.delta));
            match &it.verdict {
                TensorMembership::InIdeal(cert) => {
                    self.line(format!("  status: in-ideal depth {}", cert.depth()));
                    self.tensor_certificate(cert, rels, &it.delta);
                }
                TensorMembership::NotFound => self.line("  status: not-found"),
            }
        }
        let failing = report
            .items
            .iter()
            .filter(|i| !i.verdict.is_member())
            .map(|i| i.relation.to_string());
        self.list("failing", failing);
    }

    fn tensor_certificate(&mut self, cert: &TensorCertificate, rels: &RelationSet, target: &TensorPoly) {
        assert!(cert.verifies(rels, target), "tensor certificate does not re-expand");
        self.line(format!("  tensor-certificate: {} {}", cert.left.len(), cert.right.len()));
        for (c, y) in &cert.left {
            self.line(format!("    left {} {}", y, c.len()));
            let text = c.to_string();
            self.body.extend(indent(&text, "      "));
        }
        for (b, c) in &cert.right {
            self.line(format!("    right {} {}", c.len(), b));
            let text = c.to_string();
            self.body.extend(indent(&text, "      "));
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(REPORT_HEADER);
        out.push('\n');
        for l in &self.head {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(if self.passed { "verdict: pass\n" } else { "verdict: fail\n" });
        for l in &self.body {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }
}

/// Splits at ` + ` outside parentheses.
fn top_level_terms(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b' ' if depth == 0 && text[i..].starts_with(" + ") => {
                out.push(&text[start..i]);
                start = i + 3;
                i += 2;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&text[start..]);
    out
}

fn parse_word(text: &str, sa: &BTreeSet<Gen>) -> Result<Word, String> {
    let p = NCPoly::parse(&format!("(1)*{}", text.trim()), sa).map_err(|e| e.to_string())?;
    let (w, _) = p.terms().next().ok_or("empty word")?;
    Ok(w.clone())
}

/// Parses the `Display` form of a tensor polynomial, `(c)*a@b + ...`.
pub fn parse_tensor(text: &str, sa: &BTreeSet<Gen>) -> Result<TensorPoly, String> {
    let mut t = TensorPoly::zero();
    if text.trim() == "0" {
        return Ok(t);
    }
    for term in top_level_terms(text.trim()) {
        let close = term.find(")*").ok_or_else(|| format!("bad tensor term '{}'", term))?;
        let coeff: Scalar = term[1..close].parse().map_err(|e: cqgalg::Error| e.to_string())?;
        let (a, b) = term[close + 2..].split_once('@').ok_or_else(|| format!("missing '@' in '{}'", term))?;
        let a = NCPoly::word(parse_word(a, sa)?);
        let b = NCPoly::word(parse_word(b, sa)?);
        t = t.add(&TensorPoly::simple(&a.scale(&coeff), &b));
    }
    Ok(t)
}

/// Re-verifies every certificate in a report from its text alone and
/// returns how many were checked.
pub fn verify_report(text: &str) -> Result<usize, String> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first() != Some(&REPORT_HEADER) {
        return Err("not a report".into());
    }
    let mut sa = BTreeSet::new();
    let mut rels = RelationSet::default();
    let mut verified = 0;
    let mut i = 1;
    let at = |i: usize| lines.get(i).copied().unwrap_or("");
    let count = |l: &str, key: &str| -> Option<usize> { l.strip_prefix(key)?.trim().parse().ok() };
    while i < lines.len() {
        let l = lines[i];
        if let Some(rest) = l.strip_prefix("self-adjoint: ") {
            for g in rest.split_whitespace().filter(|g| *g != "none") {
                sa.insert(g.parse::<Gen>().map_err(|e| e.to_string())?.plain());
            }
        } else if let Some(n) = count(l, "ideal:") {
            let mut rs = Vec::with_capacity(n);
            for k in 0..n {
                let row = at(i + 1 + k).trim();
                let (idx, poly) = row.split_once(' ').ok_or("bad ideal row")?;
                if idx != format!("#{}", k) {
                    return Err(format!("ideal row {} out of order", k));
                }
                rs.push(NCPoly::parse(poly, &sa).map_err(|e| e.to_string())?);
            }
            rels = RelationSet::new(rs);
            if rels.len() != n {
                return Err("ideal rows are not a canonical relation set".into());
            }
            i += n;
        } else if let Some(img) = l.strip_prefix("  image: ") {
            let target = NCPoly::parse(img, &sa).map_err(|e| e.to_string())?;
            if at(i + 1).starts_with("  status: in-ideal") {
                let n = count(at(i + 2).trim(), "certificate:").ok_or("missing certificate")?;
                let body = lines.get(i + 3..i + 3 + n).ok_or("truncated certificate")?.join("\n");
                let cert = MembershipCertificate::parse(&body, &sa).map_err(|e| e.to_string())?;
                if !cert.verifies(&rels, &target) {
                    return Err(format!("certificate for {} does not verify", img));
                }
                verified += 1;
                i += 2 + n;
            }
        } else if let Some(d) = l.strip_prefix("  delta: ") {
            let target = parse_tensor(d, &sa)?;
            if at(i + 1).starts_with("  status: in-ideal") {
                let head = at(i + 2).trim().strip_prefix("tensor-certificate: ").ok_or("missing tensor certificate")?;
                let (nl, nr) = head.split_once(' ').ok_or("bad tensor certificate header")?;
                let (nl, nr): (usize, usize) =
                    (nl.parse().map_err(|_| "bad count")?, nr.parse().map_err(|_| "bad count")?);
                let mut cert = TensorCertificate::default();
                let mut j = i + 3;
                for side in 0..nl + nr {
                    let h = at(j).trim();
                    let (kind, rest) = h.split_once(' ').ok_or("bad tensor certificate row")?;
                    // `left <word> <m>` or `right <m> <poly>`
                    let (m, other) = match (kind, side < nl) {
                        ("left", true) => {
                            let (w, m) = rest.rsplit_once(' ').ok_or("bad left row")?;
                            (m, w)
                        }
                        ("right", false) => rest.split_once(' ').ok_or("bad right row")?,
                        _ => return Err(format!("unexpected row '{}'", h)),
                    };
                    let m: usize = m.parse().map_err(|_| "bad count")?;
                    let body = lines.get(j + 1..j + 1 + m).ok_or("truncated certificate")?.join("\n");
                    let c = MembershipCertificate::parse(&body, &sa).map_err(|e| e.to_string())?;
                    if kind == "left" {
                        cert.left.push((c, parse_word(other, &sa)?));
                    } else {
                        cert.right.push((NCPoly::parse(other, &sa).map_err(|e| e.to_string())?, c));
                    }
                    j += 1 + m;
                }
                if !cert.verifies(&rels, &target) {
                    return Err(format!("tensor certificate for {} does not verify", d));
                }
                verified += 1;
                i = j - 1;
            }
        }
        i += 1;
    }
    Ok(verified)
}
