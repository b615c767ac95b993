//! Compact quantum group presentations: the named universal families,
//! quantum unitary and automorphism groups of finite-dimensional algebras,
//! and the combinators and checks acting on them.

mod aaut;
pub(crate) mod named;
mod real;
mod text;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::freestar::{coproduct, counit, Gen, HopfData, NCPoly, TensorPoly};
use crate::ideal::{
    check_commutative_letters, commutator, eliminate_linear, membership_many_escalating,
    tensor_membership_many, CertificateSpan, CommutativityReport, Elimination, Membership,
    RelationSet, TensorMembership,
};
use crate::matrep::GenMatrix;
use crate::scalars::Scalar;

pub use aaut::{make_aaut, make_aaut_real, make_aaut_real_unreduced};
pub use named::{
    derive_from_bilinear, derive_from_state_invariance, make_ao, make_as, make_asp, make_au,
    make_austar, make_suq, quantum_unitary_complex,
};
pub use real::{quantum_unitary_real, real_form_ideal, real_state, trace_preservation_check};
pub use text::FORMAT_HEADER;

/// Structural tags carried by a presentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tags {
    pub kac: bool,
    pub commutative_claimed: bool,
}

/// One fundamental block. `label` is the namespace carried by its `u`
/// generators (0 for a lone block).
#[derive(Clone, Debug)]
pub struct Block {
    pub label: usize,
    pub matrix: GenMatrix,
}

/// Where a generator sits in the fundamental blocks: entry `(i, j)` of
/// block `block` equals `coeff` times the letter (or its adjoint).
#[derive(Clone, Debug)]
struct Slot {
    block: usize,
    i: usize,
    j: usize,
    coeff: Scalar,
    starred: bool,
}

/// Generators arranged in fundamental blocks, a star-closed relation set,
/// and the matrix coproduct `Δ(U_ij) = Σ_k U_ik ⊗ U_kj` on each block.
#[derive(Clone, Debug)]
pub struct CQGPresentation {
    name: String,
    blocks: Vec<Block>,
    relations: RelationSet,
    tags: Tags,
    slots: BTreeMap<Gen, Slot>,
}

impl CQGPresentation {
    /// Assembles a presentation, rejecting relations the counit does not kill.
    pub fn new(
        name: impl Into<String>,
        blocks: Vec<Block>,
        relations: RelationSet,
        tags: Tags,
    ) -> Result<Self> {
        for r in relations.iter() {
            if !counit(r).is_zero() {
                return Err(Error::CounitViolation(r.to_string()));
            }
        }
        let mut slots: BTreeMap<Gen, Slot> = BTreeMap::new();
        for (b, blk) in blocks.iter().enumerate() {
            for (i, j, p) in blk.matrix.entries() {
                if p.len() != 1 {
                    continue;
                }
                let (w, c) = p.leading().expect("one term");
                if w.len() != 1 {
                    continue;
                }
                let g = w.gens()[0];
                let slot = Slot { block: b, i, j, coeff: c.clone(), starred: g.is_star() };
                let key = g.base();
                match slots.get(&key) {
                    Some(old) if !old.starred || slot.starred => {}
                    _ => {
                        slots.insert(key, slot);
                    }
                }
            }
        }
        Ok(CQGPresentation { name: name.into(), blocks, relations, tags, slots })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn tags(&self) -> Tags {
        self.tags
    }

    /// Total number of fundamental matrix entries.
    pub fn matrix_entries(&self) -> usize {
        self.blocks.iter().map(|b| b.matrix.rows() * b.matrix.cols()).sum()
    }

    /// Base generators occurring in the blocks or the relations.
    pub fn generators(&self) -> BTreeSet<Gen> {
        let mut out = BTreeSet::new();
        for b in &self.blocks {
            for (_, _, p) in b.matrix.entries() {
                out.extend(p.generators().into_iter().map(Gen::base));
            }
        }
        for r in self.relations.iter() {
            out.extend(r.generators().into_iter().map(Gen::base));
        }
        out
    }

    /// Generators declared self-adjoint.
    pub fn self_adjoint(&self) -> BTreeSet<Gen> {
        self.generators().into_iter().filter(|g| g.is_self_adjoint()).collect()
    }

    /// Every letter: each generator and, unless self-adjoint, its adjoint.
    pub fn letters(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        for g in self.generators() {
            out.push(g);
            if !g.is_self_adjoint() {
                out.push(g.star());
            }
        }
        out
    }

    /// Adjoins relations (star-closed); the fundamental blocks are untouched.
    pub fn quotient(&self, extra: &RelationSet) -> Result<CQGPresentation> {
        let mut rels = self.relations.clone();
        rels.extend(extra.iter().cloned());
        CQGPresentation::new(format!("{}/I", self.name), self.blocks.clone(), rels, self.tags)
    }

    /// Solves the linear relations and substitutes the result into both the
    /// relations and the fundamental blocks.
    pub fn eliminated(&self) -> Result<(CQGPresentation, Elimination)> {
        let elim = eliminate_linear(&self.relations)?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block { label: b.label, matrix: b.matrix.substitute(&mut |g| elim.image(g)) })
            .collect();
        let p = CQGPresentation::new(self.name.clone(), blocks, elim.relations.clone(), self.tags)?;
        Ok((p, elim))
    }

    /// `Δ(r)` for every relation, tested against `J ⊗ F + F ⊗ J`.
    pub fn corepresentation_check(&self, span: CertificateSpan) -> Result<Vec<TensorMembership>> {
        let deltas: Vec<TensorPoly> =
            self.relations.iter().map(|r| coproduct(r, self)).collect::<Result<_>>()?;
        tensor_membership_many(&deltas, &self.relations, span)
    }

    fn slot(&self, g: Gen) -> Result<&Slot> {
        self.slots.get(&g.base()).ok_or_else(|| Error::UnknownGenerator(g.to_string()))
    }
}

impl HopfData for CQGPresentation {
    fn name(&self) -> &str {
        &self.name
    }

    fn delta_gen(&self, g: Gen) -> Result<TensorPoly> {
        let s = self.slot(g)?;
        let m = &self.blocks[s.block].matrix;
        let mut t = TensorPoly::zero();
        for k in 0..m.cols() {
            t = t.add(&TensorPoly::simple(&m.get(s.i, k), &m.get(k, s.j)));
        }
        let t = t.scale(&s.coeff.inv());
        Ok(if g.is_star() != s.starred { t.star() } else { t })
    }

    fn antipode_gen(&self, g: Gen) -> Result<NCPoly> {
        let s = self.slot(g)?;
        let m = &self.blocks[s.block].matrix;
        let x = m.get(s.j, s.i).star().scale(&s.coeff.inv());
        Ok(if g.is_star() != s.starred { x.star() } else { x })
    }

    fn is_kac(&self) -> bool {
        self.tags.kac
    }
}

/// Free product: generators are renamed into fresh block namespaces
/// `1, 2, ...` in order, relations are concatenated.
pub fn free_product(list: &[CQGPresentation]) -> Result<CQGPresentation> {
    if list.is_empty() {
        return Err(Error::ShapeMismatch("free product of no presentations".into()));
    }
    let with_aut = list
        .iter()
        .filter(|p| p.generators().iter().any(|g| g.letter() == crate::freestar::Letter::A))
        .count();
    if with_aut > 1 {
        return Err(Error::UnsupportedSpec(
            "free product of several automorphism presentations".into(),
        ));
    }
    let mut blocks = Vec::new();
    let mut rels = Vec::new();
    let mut kac = true;
    for p in list {
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        for b in &p.blocks {
            let fresh = blocks.len() + relabel.len() + 1;
            relabel.entry(b.label).or_insert(fresh);
        }
        let mut rename = |g: Gen| -> NCPoly {
            match (g.letter(), relabel.get(&g.block())) {
                (crate::freestar::Letter::U, Some(&nb)) => NCPoly::gen(g.in_block(nb)),
                _ => NCPoly::gen(g),
            }
        };
        for b in &p.blocks {
            blocks.push(Block { label: relabel[&b.label], matrix: b.matrix.substitute(&mut rename) });
        }
        rels.extend(p.relations.iter().map(|r| r.substitute(&mut rename)));
        kac &= p.tags.kac;
    }
    let name = list.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(" * ");
    CQGPresentation::new(name, blocks, RelationSet::new(rels), Tags { kac, commutative_claimed: false })
}

/// Adjoins the commutator of every pair of distinct letters.
pub fn abelianize(pres: &CQGPresentation) -> Result<CQGPresentation> {
    let letters = pres.letters();
    let mut extra = Vec::new();
    for (k, &g) in letters.iter().enumerate() {
        for &h in &letters[k + 1..] {
            extra.push(commutator(&NCPoly::gen(g), &NCPoly::gen(h)));
        }
    }
    let mut q = pres.quotient(&RelationSet::new(extra))?;
    q.name = format!("ab({})", pres.name);
    q.tags.commutative_claimed = true;
    Ok(q)
}

/// A subalgebra given by generators inside a presentation.
#[derive(Clone, Debug)]
pub struct SubalgebraView {
    pub ambient: CQGPresentation,
    pub generators: Vec<NCPoly>,
}

impl SubalgebraView {
    /// For each generator, whether it equals its counit value in the
    /// quotient (found within depth `k_max`).
    pub fn scalar_generators(&self, k_max: usize) -> Result<Vec<bool>> {
        let targets: Vec<NCPoly> = self
            .generators
            .iter()
            .map(|g| g.sub(&NCPoly::constant(counit(g))))
            .collect();
        Ok(membership_many_escalating(&targets, &self.ambient.relations, 0, k_max)?
            .into_iter()
            .map(|(m, _)| m.is_member())
            .collect())
    }
}

/// The projective version: generated by `x · y°` for all fundamental
/// entries `x, y`, across all blocks, up to scalar multiples.
pub fn projective(pres: &CQGPresentation) -> SubalgebraView {
    let entries: Vec<&NCPoly> =
        pres.blocks.iter().flat_map(|b| b.matrix.entries().into_iter().map(|(_, _, p)| p)).collect();
    let mut seen = BTreeSet::new();
    let mut generators = Vec::new();
    for x in &entries {
        for y in &entries {
            let m = x.mul(&y.star());
            if !m.is_zero() && seen.insert(m.monic()) {
                generators.push(m);
            }
        }
    }
    SubalgebraView { ambient: pres.clone(), generators }
}

/// One membership query made by a check.
#[derive(Clone, Debug)]
pub struct MembershipCheck {
    /// What was checked, in the source presentation's terms.
    pub label: String,
    /// The element actually tested against the target ideal.
    pub image: NCPoly,
    pub verdict: Membership,
    /// Cofactor depth at which the verdict was reached.
    pub depth: usize,
}

/// Outcome of a batch of membership queries.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub items: Vec<MembershipCheck>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|c| c.verdict.is_member())
    }

    pub fn failing(&self) -> impl Iterator<Item = &MembershipCheck> {
        self.items.iter().filter(|c| !c.verdict.is_member())
    }

    /// Largest depth used by a successful query.
    pub fn depth(&self) -> usize {
        self.items.iter().filter(|c| c.verdict.is_member()).map(|c| c.depth).max().unwrap_or(0)
    }

    pub(crate) fn run(
        pairs: Vec<(String, NCPoly)>,
        rels: &RelationSet,
        k_max: usize,
    ) -> Result<CheckReport> {
        let images: Vec<NCPoly> = pairs.iter().map(|(_, i)| i.clone()).collect();
        let verdicts = membership_many_escalating(&images, rels, 0, k_max)?;
        let items = pairs
            .into_iter()
            .zip(verdicts)
            .map(|((label, image), (verdict, depth))| MembershipCheck {
                label,
                image,
                verdict,
                depth,
            })
            .collect();
        Ok(CheckReport { items })
    }
}

/// A substitution on letters, closed under the star.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Gen, NCPoly>,
}

impl Substitution {
    /// Accepts images for base or starred letters; when both a letter and its
    /// adjoint are given they must be adjoint to each other.
    pub fn new(entries: impl IntoIterator<Item = (Gen, NCPoly)>) -> Result<Self> {
        let mut map: BTreeMap<Gen, NCPoly> = BTreeMap::new();
        for (g, p) in entries {
            let (key, val) = if g.is_star() { (g.star(), p.star()) } else { (g, p) };
            if let Some(old) = map.get(&key) {
                if *old != val {
                    return Err(Error::InconsistentSubstitution(format!(
                        "{} and {} are not adjoint images",
                        key,
                        key.star()
                    )));
                }
            }
            map.insert(key, val);
        }
        Ok(Substitution { map })
    }

    pub fn image(&self, g: Gen) -> NCPoly {
        match self.map.get(&g.base()) {
            Some(p) if g.is_star() => p.star(),
            Some(p) => p.clone(),
            None => NCPoly::gen(g),
        }
    }

    pub fn apply(&self, p: &NCPoly) -> NCPoly {
        p.substitute(&mut |g| self.image(g))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gen, &NCPoly)> {
        self.map.iter()
    }
}

/// Checks that `subst` defines a homomorphism `src -> dst`: the image of
/// every relation of `src`, and `x - x°` for each self-adjoint generator,
/// must lie in the ideal of `dst` within depth `k_max`.
pub fn hom_check(
    src: &CQGPresentation,
    dst: &CQGPresentation,
    subst: &Substitution,
    k_max: usize,
) -> Result<CheckReport> {
    let mut pairs: Vec<(String, NCPoly)> =
        src.relations.iter().map(|r| (r.to_string(), subst.apply(r))).collect();
    for g in src.self_adjoint() {
        let img = subst.image(g);
        pairs.push((format!("{} self-adjoint", g), img.sub(&img.star())));
    }
    CheckReport::run(pairs, &dst.relations, k_max)
}

/// Per-relation outcome of a Woronowicz ideal check.
#[derive(Clone, Debug)]
pub struct WoronowiczItem {
    pub relation: NCPoly,
    pub delta: TensorPoly,
    pub verdict: TensorMembership,
}

/// Whether `Δ(t) ∈ J ⊗ F + F ⊗ J` for each adjoined relation `t`.
#[derive(Clone, Debug, Default)]
pub struct WoronowiczReport {
    pub items: Vec<WoronowiczItem>,
}

impl WoronowiczReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.verdict.is_member())
    }
}

/// Tests that `extra` generates a Woronowicz ideal over `pres`, relative to
/// the relations of the quotient.
pub fn woronowicz_check(
    pres: &CQGPresentation,
    extra: &RelationSet,
    span: CertificateSpan,
) -> Result<WoronowiczReport> {
    let q = pres.quotient(extra)?;
    let deltas: Vec<TensorPoly> = extra.iter().map(|t| coproduct(t, &q)).collect::<Result<_>>()?;
    let verdicts = tensor_membership_many(&deltas, &q.relations, span)?;
    let items = extra
        .iter()
        .zip(deltas)
        .zip(verdicts)
        .map(|((t, delta), verdict)| WoronowiczItem { relation: t.clone(), delta, verdict })
        .collect();
    Ok(WoronowiczReport { items })
}

/// Commutativity after linear elimination; certificates refer to the
/// eliminated relation set carried in `elimination`.
#[derive(Clone, Debug)]
pub struct CommutativityCheck {
    pub elimination: Elimination,
    pub letters: Vec<Gen>,
    pub report: CommutativityReport,
}

pub fn check_commutative(
    pres: &CQGPresentation,
    span: CertificateSpan,
) -> Result<CommutativityCheck> {
    let (reduced, elimination) = pres.eliminated()?;
    let letters = reduced.letters();
    let report = check_commutative_letters(&letters, &elimination.relations, span)?;
    Ok(CommutativityCheck { elimination, letters, report })
}

/// The fundamental block matrices, as used by the coproduct.
pub fn fundamental(pres: &CQGPresentation) -> Vec<GenMatrix> {
    pres.blocks.iter().map(|b| b.matrix.clone()).collect()
}
