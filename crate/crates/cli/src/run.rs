//! Dispatch from a job to the engine.

use std::collections::BTreeSet;

use cqgalg::cqg::*;
use cqgalg::gauge::{
    builtin_triple, classical_gauge_check, compare_supports, displayed_v, gauge_corep, unitary_group_of,
    FiniteSpectralTriple, KernelClass,
};
use cqgalg::ideal::{CertificateSpan, RelationSet};
use cqgalg::{Error, Gen, NCPoly, Result, StateSpec};

use crate::group;
use crate::job::{Command, JobConfig, MatrixList};
use crate::report::Report;

/// Finished run: the report text, an optional presentation to write and
/// whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: String,
    pub presentation: Option<String>,
    pub passed: bool,
}

fn missing(key: &str, cmd: Command) -> Error {
    Error::UnsupportedSpec(format!("'{}' needs '{}'", cmd, key))
}

fn span(cfg: &JobConfig, default_k: usize) -> CertificateSpan {
    let mut s = CertificateSpan::depth(cfg.k.unwrap_or(default_k));
    if let Some(b) = cfg.budget {
        s = s.with_budget(b);
    }
    s.max_degree = cfg.max_degree;
    s
}

/// The group a command acts on: `group`, else `preset`.
fn subject(cfg: &JobConfig, cmd: Command, r: &mut Report) -> Result<CQGPresentation> {
    let text = match (&cfg.group, &cfg.preset) {
        (Some(g), None) => {
            r.input("group", g);
            g.as_str()
        }
        (None, Some(p)) => {
            r.input("preset", p);
            group::preset(p)?
        }
        (Some(_), Some(_)) => {
            return Err(Error::UnsupportedSpec("give either 'group' or 'preset', not both".into()))
        }
        (None, None) => return Err(missing("group", cmd)),
    };
    group::build(text)
}

fn algebra(cfg: &JobConfig, cmd: Command, r: &mut Report) -> Result<cqgalg::RealCStarSpec> {
    let a = cfg.algebra.as_deref().ok_or_else(|| missing("algebra", cmd))?;
    let spec = group::parse_spec(a)?;
    r.input("algebra", &spec);
    Ok(spec)
}

fn twist(list: &Option<MatrixList>, key: &str, sizes: &[usize], r: &mut Report) -> Result<Vec<cqgalg::ScalarMatrix>> {
    let list = list.clone().unwrap_or(MatrixList::Identity);
    r.input(key, &list);
    list.resolve(sizes)
}

fn triple(cfg: &JobConfig, cmd: Command, r: &mut Report) -> Result<(FiniteSpectralTriple, bool)> {
    let name = cfg.triple.as_deref().ok_or_else(|| missing("triple", cmd))?;
    r.input("triple", name);
    match builtin_triple(name) {
        Ok(t) => Ok((t, true)),
        Err(Error::UnknownName(_)) if std::path::Path::new(name).exists() => {
            let text = std::fs::read_to_string(name)
                .map_err(|e| Error::UnsupportedSpec(format!("cannot read {}: {}", name, e)))?;
            Ok((text.parse()?, false))
        }
        Err(e) => Err(e),
    }
}

fn self_adjoint_of(ps: &[&CQGPresentation]) -> BTreeSet<Gen> {
    ps.iter().flat_map(|p| p.self_adjoint()).collect()
}

fn parse_poly(text: &str, sa: &BTreeSet<Gen>) -> Result<NCPoly> {
    NCPoly::parse(text, sa)
}

/// Sends each generator to the entry at its place in the block of `to`
/// with the same label.
fn by_place(from: &CQGPresentation, to: &CQGPresentation) -> Result<Substitution> {
    Substitution::new(from.generators().into_iter().filter_map(|g| {
        let blk = to.blocks().iter().find(|b| b.label == g.block())?;
        (g.row() <= blk.matrix.rows() && g.col() <= blk.matrix.cols())
            .then(|| (g, blk.matrix.get(g.row() - 1, g.col() - 1)))
    }))
}

pub fn run(cfg: &JobConfig) -> Result<Outcome> {
    let cmd = cfg.command.ok_or_else(|| Error::UnsupportedSpec("no command given".into()))?;
    let mut r = Report::new(cmd.as_str());
    let mut presentation = None;
    match cmd {
        Command::Qunitary if cfg.b.is_some() => {
            // the free unitary group preserving a bilinear form
            let b = cfg.b.as_ref().unwrap();
            r.input("B", b);
            let rels = derive_from_bilinear(b)?;
            let au = make_au(b.rows(), &b.inverse()?)?;
            let p = CQGPresentation::new(format!("O^+(B = {})", b), au.blocks().to_vec(), rels, Tags::default())?;
            r.presentation(&p);
            presentation = Some(p.to_string());
        }
        Command::Qunitary => {
            let spec = algebra(cfg, cmd, &mut r)?;
            let mut sizes = Vec::new();
            for b in spec.blocks() {
                if b.ring != cqgalg::DivRing::C {
                    return Err(Error::UnsupportedSpec(format!("{}: complex blocks C(n) only", spec)));
                }
                sizes.push(b.n);
            }
            let states = twist(&cfg.r, "R", &sizes, &mut r)?;
            let p = quantum_unitary_complex(&sizes, &StateSpec::new(states)?)?;
            r.presentation(&p);
            presentation = Some(p.to_string());
        }
        Command::QunitaryReal => {
            let spec = algebra(cfg, cmd, &mut r)?;
            let f = twist(&cfg.f, "F", &group::complex_sizes(&spec), &mut r)?;
            let p = quantum_unitary_real(&spec, &f)?;
            r.presentation(&p);
            presentation = Some(p.to_string());
        }
        Command::Qaut => {
            let n = cfg.n.ok_or_else(|| missing("n", cmd))?;
            r.input("n", n);
            let p = make_aaut(n)?;
            r.presentation(&p);
            presentation = Some(p.to_string());
        }
        Command::QautReal => {
            let spec = algebra(cfg, cmd, &mut r)?;
            let p = make_aaut_real(&spec)?;
            r.presentation(&p);
            presentation = Some(p.to_string());
        }
        Command::Qiso => {
            let n = cfg.n.ok_or_else(|| missing("n", cmd))?;
            r.input("n", n);
            let p = cqgalg::gauge::qiso_presentation(n)?;
            r.presentation(&p);
            presentation = Some(p.to_string());
        }
        Command::Abelianize => {
            let p = abelianize(&subject(cfg, cmd, &mut r)?)?;
            r.presentation(&p);
            presentation = Some(p.to_string());
        }
        Command::Projective => {
            let p = subject(cfg, cmd, &mut r)?;
            let view = projective(&p);
            r.field("ambient", p.name());
            r.list("generators", view.generators.iter().map(|g| g.to_string()));
        }
        Command::HomCheck => {
            let src_text = cfg.source.as_deref().ok_or_else(|| missing("source", cmd))?;
            let dst_text = cfg.target.as_deref().ok_or_else(|| missing("target", cmd))?;
            r.input("source", src_text);
            r.input("target", dst_text);
            let k = cfg.k.unwrap_or(1);
            r.input("k", k);
            let src = group::build(src_text)?;
            let dst = group::build(dst_text)?;
            let sa = self_adjoint_of(&[&src, &dst]);
            let subst = if cfg.map.is_empty() {
                r.input("map", "by position");
                by_place(&src, &dst)?
            } else {
                let mut pairs = Vec::new();
                for (g, p) in &cfg.map {
                    r.input("map", format!("{} -> {}", g, p));
                    pairs.push((g.parse::<Gen>()?, parse_poly(p, &sa)?));
                }
                Substitution::new(pairs)?
            };
            let rep = hom_check(&src, &dst, &subst, k)?;
            r.self_adjoint(&sa);
            r.ideal(dst.relations());
            r.checks(&rep, dst.relations());
        }
        Command::WoroCheck => {
            let k = cfg.k.unwrap_or(1);
            let (pres, extra) = match cfg.ideal.as_deref() {
                Some("real-form") => {
                    r.input("ideal", "real-form");
                    let spec = algebra(cfg, cmd, &mut r)?;
                    let f = twist(&cfg.f, "F", &group::complex_sizes(&spec), &mut r)?;
                    real_form_ideal(&spec, &f)?
                }
                Some("commutators") => {
                    r.input("ideal", "commutators");
                    let p = subject(cfg, cmd, &mut r)?;
                    let ab = abelianize(&p)?;
                    let added = ab.relations().iter().filter(|x| !p.relations().iter().any(|y| y == *x));
                    let extra = RelationSet::new(added.cloned());
                    (p, extra)
                }
                Some(other) => return Err(Error::UnknownName(format!("ideal '{}'", other))),
                None => {
                    let p = subject(cfg, cmd, &mut r)?;
                    let sa = p.self_adjoint();
                    let mut rels = Vec::new();
                    for t in &cfg.relations {
                        r.input("relation", t);
                        rels.push(parse_poly(t, &sa)?);
                    }
                    if rels.is_empty() {
                        return Err(missing("relation", cmd));
                    }
                    (p, RelationSet::new(rels))
                }
            };
            r.input("k", k);
            let rep = woronowicz_check(&pres, &extra, span(cfg, k))?;
            let q = pres.quotient(&extra)?;
            r.self_adjoint(&q.self_adjoint());
            r.ideal(q.relations());
            r.tensor_checks(&rep, q.relations());
        }
        Command::CommutativeCheck => {
            let p = subject(cfg, cmd, &mut r)?;
            let k = cfg.k.unwrap_or(1);
            r.input("k", k);
            let c = check_commutative(&p, span(cfg, k))?;
            r.field("letters", c.letters.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" "));
            r.self_adjoint(&p.self_adjoint());
            r.ideal(&c.elimination.relations);
            r.commutators(&c.report, &c.elimination.relations);
        }
        Command::TraceCheck => {
            let spec = algebra(cfg, cmd, &mut r)?;
            let f = twist(&cfg.f, "F", &group::complex_sizes(&spec), &mut r)?;
            let k = cfg.k.unwrap_or(2);
            r.input("k", k);
            let p = quantum_unitary_real(&spec, &f)?;
            let state = real_state(&spec, &f)?;
            let rep = trace_preservation_check(&p, &state, k)?;
            r.self_adjoint(&p.self_adjoint());
            r.ideal(p.relations());
            r.checks(&rep, p.relations());
        }
        Command::Qgauge => {
            let (t, builtin) = triple(cfg, cmd, &mut r)?;
            let p = unitary_group_of(&t)?;
            let g = gauge_corep(&t, &p)?;
            r.field("algebra", t.spec());
            r.field("dim", t.dim());
            r.field("group", p.name());
            r.field("unitarity", if g.unitarity.passed() { "pass" } else { "fail" });
            r.field("unitarity-checks", g.unitarity.items.len());
            r.require(g.unitarity.passed());
            r.list("monomials", g.monomials.iter().map(|w| w.to_string()));
            if builtin {
                let diff = compare_supports(&g.v, &displayed_v(t.name(), &p)?);
                r.field("display", if diff.is_empty() { "matches" } else { "differs" });
                r.list("display-mismatches", diff.iter().map(|m| m.word.to_string()));
                r.require(diff.is_empty());
            } else {
                r.field("display", "(none)");
            }
        }
        Command::ClassicalCheck => {
            let (t, _) = triple(cfg, cmd, &mut r)?;
            let samples = cfg.samples.unwrap_or(200);
            let seed = cfg.seed.unwrap_or(2024);
            r.input("samples", samples);
            r.input("seed", seed);
            let c = classical_gauge_check(&t, samples, seed)?;
            let kernel = match c.kernel {
                KernelClass::Circle => "circle",
                KernelClass::Signs => "signs",
            };
            r.field("kernel", kernel);
            r.field("kernel-hits", c.kernel_hits);
            r.field("misclassified", c.misclassified);
            r.field("max-kernel-residual", format!("{:.3e}", c.max_kernel_residual));
            r.field("min-outside-residual", format!("{:.3e}", c.min_outside_residual));
            r.field("lie-kernel-dim", format!("{} (expected {})", c.lie_kernel_dim, c.expected_lie_kernel_dim));
            r.require(c.passed());
        }
    }
    Ok(Outcome { passed: r.passed(), report: r.render(), presentation })
}
