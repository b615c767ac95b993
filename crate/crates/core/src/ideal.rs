//! Two-sided *-ideals of the free algebra, explored through the finite
//! spans `J_k = span{ w1 r w2 : r a relation, |w1| + |w2| <= k }`.
//!
//! Every positive answer carries a certificate that is re-expanded and
//! compared with the query before it is returned.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::freestar::{Gen, NCPoly, TensorPoly, Word};
use crate::scalars::Scalar;

/// Default cap on the number of distinct words in a span.
pub const DEFAULT_WORD_BUDGET: usize = 500_000;

/// Environment variable overriding [`DEFAULT_WORD_BUDGET`].
pub const BUDGET_ENV: &str = "CQG_WORD_BUDGET";

/// A star-closed list of nonzero relations, free of scalar-multiple repeats,
/// kept in canonical (sorted) order so that indices are reproducible.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationSet {
    rels: Vec<NCPoly>,
}

impl RelationSet {
    /// Builds the star closure: each relation is followed by its adjoint
    /// unless that is already present up to a scalar.
    pub fn new(rels: impl IntoIterator<Item = NCPoly>) -> Self {
        let mut s = RelationSet::default();
        s.extend(rels);
        s
    }

    pub fn extend(&mut self, rels: impl IntoIterator<Item = NCPoly>) {
        let mut seen: BTreeSet<NCPoly> = self.rels.iter().map(|r| r.monic()).collect();
        for r in rels {
            for x in [r.clone(), r.star()] {
                if !x.is_zero() && seen.insert(x.monic()) {
                    self.rels.push(x);
                }
            }
        }
        self.rels.sort();
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rels.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NCPoly> {
        self.rels.iter()
    }

    pub fn as_slice(&self) -> &[NCPoly] {
        &self.rels
    }

    pub fn get(&self, i: usize) -> &NCPoly {
        &self.rels[i]
    }

    /// Every letter occurring, closed under star.
    pub fn alphabet(&self) -> BTreeSet<Gen> {
        let mut a = BTreeSet::new();
        for r in &self.rels {
            for g in r.generators() {
                a.insert(g);
                a.insert(g.star());
            }
        }
        a
    }

    pub fn is_star_closed(&self) -> bool {
        let set: BTreeSet<NCPoly> = self.rels.iter().map(|r| r.monic()).collect();
        self.rels.iter().all(|r| set.contains(&r.star().monic()))
    }

    pub fn max_degree(&self) -> usize {
        self.rels.iter().map(|r| r.degree()).max().unwrap_or(0)
    }
}

/// Bounds of the explored span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateSpan {
    /// Maximal degree of each cofactor word, left and right separately.
    pub k: usize,
    /// Optional cap on the degree of each product `w1 r w2`.
    pub max_degree: Option<usize>,
    /// Maximal number of distinct words.
    pub budget: usize,
}

impl CertificateSpan {
    /// Depth `k`, no degree cap, budget from the environment or default.
    pub fn depth(k: usize) -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_WORD_BUDGET);
        CertificateSpan { k, max_degree: None, budget }
    }

    pub fn with_max_degree(mut self, d: usize) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn with_budget(mut self, b: usize) -> Self {
        self.budget = b;
        self
    }
}

impl Default for CertificateSpan {
    fn default() -> Self {
        CertificateSpan::depth(1)
    }
}

/// One summand `coeff * left * rel[index] * right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertTerm {
    pub coeff: Scalar,
    pub left: Word,
    pub rel: usize,
    pub right: Word,
}

/// A finite combination of relation products.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub terms: Vec<CertTerm>,
}

impl MembershipCertificate {
    pub fn expand(&self, rels: &RelationSet) -> NCPoly {
        let mut out = NCPoly::zero();
        for t in &self.terms {
            out.add_scaled(&rels.get(t.rel).sandwich(&t.left, &t.right), &t.coeff);
        }
        out
    }

    pub fn verifies(&self, rels: &RelationSet, p: &NCPoly) -> bool {
        self.terms.iter().all(|t| t.rel < rels.len()) && self.expand(rels) == *p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest cofactor length on either side.
    pub fn depth(&self) -> usize {
        self.terms.iter().map(|t| t.left.len().max(t.right.len())).max().unwrap_or(0)
    }

    fn from_map(m: BTreeMap<(usize, Word, Word), Scalar>) -> Self {
        MembershipCertificate {
            terms: m
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((rel, left, right), coeff)| CertTerm { coeff, left, rel, right })
                .collect(),
        }
    }

    /// `a * self + b * other`, merging equal products.
    pub fn combine(&self, a: &Scalar, other: &Self, b: &Scalar) -> Self {
        let mut m: BTreeMap<(usize, Word, Word), Scalar> = BTreeMap::new();
        for (cert, f) in [(self, a), (other, b)] {
            for t in &cert.terms {
                *m.entry((t.rel, t.left.clone(), t.right.clone())).or_default() += &t.coeff * f;
            }
        }
        MembershipCertificate::from_map(m)
    }

    /// Parses the text produced by `Display`.
    pub fn parse(text: &str, self_adjoint: &BTreeSet<Gen>) -> Result<Self> {
        let mut terms = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse { col: 1, msg: format!("line {}: {}", ln + 1, msg) };
            let parts: Vec<&str> = line.split(" | ").collect();
            if parts.len() != 4 {
                return Err(bad("expected 'coeff | left | #rel | right'"));
            }
            let coeff: Scalar = parts[0].trim_start_matches('(').trim_end_matches(')').parse()?;
            let word = |t: &str| -> Result<Word> {
                let p = NCPoly::parse(&format!("(1)*{}", t), self_adjoint)?;
                let (w, _) = p.terms().next().ok_or_else(|| bad("empty word"))?;
                Ok(w.clone())
            };
            let rel = parts[2]
                .strip_prefix('#')
                .and_then(|x| x.parse::<usize>().ok())
                .ok_or_else(|| bad("bad relation index"))?;
            terms.push(CertTerm { coeff, left: word(parts[1])?, rel, right: word(parts[3])? });
        }
        Ok(MembershipCertificate { terms })
    }
}

impl fmt::Display for MembershipCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "({}) | {} | #{} | {}", t.coeff, t.left, t.rel, t.right)?;
        }
        Ok(())
    }
}

/// Outcome of a membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    InIdeal(MembershipCertificate),
    /// No certificate inside the explored span; says nothing about the ideal.
    NotFound,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::InIdeal(_))
    }
}

#[derive(Clone, Debug)]
struct Product {
    rel: usize,
    left: Word,
    right: Word,
}

#[derive(Clone, Debug)]
struct Row {
    /// Ascending by word id; the last entry is the pivot with coefficient 1.
    terms: Vec<(u32, Scalar)>,
    origin: usize,
    inv_lead: Scalar,
    log: Vec<(u32, Scalar)>,
}

/// `a - c * b` for sparse rows sorted ascending.
fn axpy(a: &[(u32, Scalar)], c: &Scalar, b: &[(u32, Scalar)]) -> Vec<(u32, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut y = x;
        while self.0[y as usize] != r {
            let n = self.0[y as usize];
            self.0[y as usize] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (x, y) = (self.find(a), self.find(b));
        if x != y {
            self.0[x.max(y) as usize] = x.min(y);
        }
    }
}

/// An echelon basis of `J_k`, restricted to the connected part of the word
/// graph that touches the target polynomials.
pub struct IdealSpan {
    rels: RelationSet,
    words: Vec<Word>,
    index: HashMap<Word, u32>,
    products: Vec<Product>,
    rows: Vec<Row>,
    pivot: Vec<u32>,
}

const NO_PIVOT: u32 = u32::MAX;

/// Size statistics of a built span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpanStats {
    pub words: usize,
    pub products: usize,
    pub rank: usize,
}

impl IdealSpan {
    /// Builds `J_k` for the given targets. With no targets the whole span
    /// is kept.
    pub fn build(rels: &RelationSet, span: CertificateSpan, targets: &[NCPoly]) -> Result<Self> {
        let mut alphabet = rels.alphabet();
        for t in targets {
            for g in t.generators() {
                alphabet.insert(g);
                alphabet.insert(g.star());
            }
        }
        let alphabet: Vec<Gen> = alphabet.into_iter().collect();
        let cofactors: Vec<Vec<Word>> =
            (0..=span.k).map(|d| Word::all_of_degree(&alphabet, d)).collect();

        let mut products = Vec::new();
        let mut seen_words: HashMap<Word, u32> = HashMap::new();
        let intern = |w: Word, seen: &mut HashMap<Word, u32>| -> Result<()> {
            if !seen.contains_key(&w) {
                let n = seen.len() as u32;
                seen.insert(w, n);
                if seen.len() > span.budget {
                    return Err(Error::SpanTooLarge { budget: span.budget, needed: seen.len() });
                }
            }
            Ok(())
        };
        for t in targets {
            for (w, _) in t.terms() {
                intern(w.clone(), &mut seen_words)?;
            }
        }
        for (ri, r) in rels.iter().enumerate() {
            let dr = r.degree();
            for dl in 0..=span.k {
                for dright in 0..=span.k {
                    if let Some(d) = span.max_degree {
                        if dr + dl + dright > d {
                            continue;
                        }
                    }
                    for left in &cofactors[dl] {
                        for right in &cofactors[dright] {
                            for (w, _) in r.terms() {
                                intern(Word::concat3(left, w, right), &mut seen_words)?;
                            }
                            products.push(Product {
                                rel: ri,
                                left: left.clone(),
                                right: right.clone(),
                            });
                        }
                    }
                }
            }
        }

        // Keep only the components of the word graph that meet a target.
        if !targets.is_empty() {
            let mut uf = UnionFind((0..seen_words.len() as u32).collect());
            for p in &products {
                let r = rels.get(p.rel);
                let mut first = None;
                for (w, _) in r.terms() {
                    let id = seen_words[&Word::concat3(&p.left, w, &p.right)];
                    match first {
                        None => first = Some(id),
                        Some(f) => uf.union(f, id),
                    }
                }
            }
            let roots: BTreeSet<u32> = targets
                .iter()
                .flat_map(|t| t.terms().map(|(w, _)| seen_words[w]).collect::<Vec<_>>())
                .map(|id| uf.find(id))
                .collect();
            products.retain(|p| {
                let r = rels.get(p.rel);
                match r.terms().next() {
                    Some((w, _)) => {
                        let id = seen_words[&Word::concat3(&p.left, w, &p.right)];
                        roots.contains(&uf.find(id))
                    }
                    None => false,
                }
            });
        }

        let mut words: Vec<Word> = Vec::new();
        {
            let mut keep: BTreeSet<Word> = BTreeSet::new();
            for t in targets {
                for (w, _) in t.terms() {
                    keep.insert(w.clone());
                }
            }
            for p in &products {
                for (w, _) in rels.get(p.rel).terms() {
                    keep.insert(Word::concat3(&p.left, w, &p.right));
                }
            }
            words.extend(keep);
        }
        let index: HashMap<Word, u32> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();

        let mut span_out = IdealSpan {
            rels: rels.clone(),
            pivot: vec![NO_PIVOT; words.len()],
            words,
            index,
            products: Vec::new(),
            rows: Vec::new(),
        };
        for p in products {
            span_out.insert(p);
        }
        Ok(span_out)
    }

    fn to_row(&self, p: &NCPoly) -> Option<Vec<(u32, Scalar)>> {
        let mut v = Vec::with_capacity(p.len());
        for (w, c) in p.terms() {
            v.push((*self.index.get(w)?, c.clone()));
        }
        Some(v)
    }

    fn insert(&mut self, prod: Product) {
        let poly = self.rels.get(prod.rel).sandwich(&prod.left, &prod.right);
        let mut row = self.to_row(&poly).expect("product words are interned");
        let origin = self.products.len();
        self.products.push(prod);
        let mut log = Vec::new();
        while let Some((lead, c)) = row.last().cloned() {
            let p = self.pivot[lead as usize];
            if p == NO_PIVOT {
                let inv = c.inv();
                for t in row.iter_mut() {
                    t.1 = &t.1 * &inv;
                }
                self.pivot[lead as usize] = self.rows.len() as u32;
                self.rows.push(Row { terms: row, origin, inv_lead: inv, log });
                return;
            }
            row = axpy(&row, &c, &self.rows[p as usize].terms);
            log.push((p, c));
        }
    }

    pub fn stats(&self) -> SpanStats {
        SpanStats { words: self.words.len(), products: self.products.len(), rank: self.rows.len() }
    }

    /// Fully reduces `p`; returns the normal form and a certificate for
    /// `p - NF(p)`.
    pub fn reduce(&self, p: &NCPoly) -> (NCPoly, MembershipCertificate) {
        let mut rem = NCPoly::zero();
        let mut row = Vec::with_capacity(p.len());
        for (w, c) in p.terms() {
            match self.index.get(w) {
                Some(&id) => row.push((id, c.clone())),
                None => rem.add_term(w.clone(), c),
            }
        }
        let mut used: BTreeMap<u32, Scalar> = BTreeMap::new();
        let mut tail: Vec<(u32, Scalar)> = Vec::new();
        while let Some((lead, c)) = row.pop() {
            let piv = self.pivot[lead as usize];
            if piv == NO_PIVOT {
                tail.push((lead, c));
                continue;
            }
            row.push((lead, c.clone()));
            row = axpy(&row, &c, &self.rows[piv as usize].terms);
            *used.entry(piv).or_default() += &c;
        }
        for (id, c) in tail {
            rem.add_term(self.words[id as usize].clone(), &c);
        }
        (rem, self.expand(used))
    }

    /// Unfolds a combination of echelon rows into relation products.
    fn expand(&self, mut coef: BTreeMap<u32, Scalar>) -> MembershipCertificate {
        let mut prods: BTreeMap<(usize, Word, Word), Scalar> = BTreeMap::new();
        while let Some((i, mu)) = coef.pop_last() {
            if mu.is_zero() {
                continue;
            }
            let row = &self.rows[i as usize];
            let f = &mu * &row.inv_lead;
            let p = &self.products[row.origin];
            *prods.entry((p.rel, p.left.clone(), p.right.clone())).or_default() += &f;
            for (j, c) in &row.log {
                *coef.entry(*j).or_default() -= &f * c;
            }
        }
        MembershipCertificate::from_map(prods)
    }

    /// Membership of `p` in this span, with a verified certificate.
    pub fn member(&self, p: &NCPoly) -> Membership {
        let (rem, cert) = self.reduce(p);
        if !rem.is_zero() {
            return Membership::NotFound;
        }
        assert!(cert.verifies(&self.rels, p), "certificate failed to re-expand");
        Membership::InIdeal(cert)
    }

    pub fn relations(&self) -> &RelationSet {
        &self.rels
    }
}

/// Membership in `J_k` for the given span.
pub fn membership(p: &NCPoly, rels: &RelationSet, span: CertificateSpan) -> Result<Membership> {
    if p.is_zero() {
        return Ok(Membership::InIdeal(MembershipCertificate::default()));
    }
    Ok(IdealSpan::build(rels, span, std::slice::from_ref(p))?.member(p))
}

/// Tries depths `0..=k_max` in turn and returns the first hit with its depth.
pub fn membership_escalating(
    p: &NCPoly,
    rels: &RelationSet,
    k_max: usize,
) -> Result<(Membership, usize)> {
    let mut last = Membership::NotFound;
    for k in 0..=k_max {
        last = membership(p, rels, CertificateSpan::depth(k))?;
        if last.is_member() {
            return Ok((last, k));
        }
    }
    Ok((last, k_max))
}

/// Batch membership: one span serves every query.
pub fn membership_many(
    ps: &[NCPoly],
    rels: &RelationSet,
    span: CertificateSpan,
) -> Result<Vec<Membership>> {
    let targets: Vec<NCPoly> = ps.iter().filter(|p| !p.is_zero()).cloned().collect();
    let sp = IdealSpan::build(rels, span, &targets)?;
    Ok(ps
        .iter()
        .map(|p| {
            if p.is_zero() {
                Membership::InIdeal(MembershipCertificate::default())
            } else {
                sp.member(p)
            }
        })
        .collect())
}

/// Per-query depth escalation from `k_min` to `k_max`: queries answered at
/// a shallow depth are not rebuilt at the deeper ones. Returns each verdict
/// with the depth that produced it.
pub fn membership_many_escalating(
    ps: &[NCPoly],
    rels: &RelationSet,
    k_min: usize,
    k_max: usize,
) -> Result<Vec<(Membership, usize)>> {
    let mut out: Vec<(Membership, usize)> = vec![(Membership::NotFound, k_max); ps.len()];
    let mut open: Vec<usize> = (0..ps.len()).collect();
    for k in k_min..=k_max {
        if open.is_empty() {
            break;
        }
        let batch: Vec<NCPoly> = open.iter().map(|&i| ps[i].clone()).collect();
        let verdicts = membership_many(&batch, rels, CertificateSpan::depth(k))?;
        let mut still = Vec::new();
        for (i, v) in open.into_iter().zip(verdicts) {
            if v.is_member() {
                out[i] = (v, k);
            } else {
                still.push(i);
            }
        }
        open = still;
    }
    Ok(out)
}

/// Witness that `t` lies in `J ⊗ F + F ⊗ J`:
/// `t = Σ_y cert_y ⊗ y + Σ_y b_y ⊗ cert'_y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorCertificate {
    pub left: Vec<(MembershipCertificate, Word)>,
    pub right: Vec<(NCPoly, MembershipCertificate)>,
}

impl TensorCertificate {
    pub fn expand(&self, rels: &RelationSet) -> TensorPoly {
        let mut t = TensorPoly::zero();
        for (c, y) in &self.left {
            t = t.add(&TensorPoly::simple(&c.expand(rels), &NCPoly::word(y.clone())));
        }
        for (b, c) in &self.right {
            t = t.add(&TensorPoly::simple(b, &c.expand(rels)));
        }
        t
    }

    pub fn verifies(&self, rels: &RelationSet, t: &TensorPoly) -> bool {
        self.expand(rels) == *t
    }

    pub fn depth(&self) -> usize {
        let l = self.left.iter().map(|(c, _)| c.depth()).max().unwrap_or(0);
        let r = self.right.iter().map(|(_, c)| c.depth()).max().unwrap_or(0);
        l.max(r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorMembership {
    InIdeal(TensorCertificate),
    NotFound,
}

impl TensorMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, TensorMembership::InIdeal(_))
    }
}

fn leg_words(t: &TensorPoly, into: &mut BTreeSet<Word>) {
    for ((a, b), _) in t.terms() {
        into.insert(a.clone());
        into.insert(b.clone());
    }
}

/// Decides `t ∈ J_k ⊗ F + F ⊗ J_k` by reducing both legs to normal form.
pub fn tensor_membership(
    t: &TensorPoly,
    rels: &RelationSet,
    span: CertificateSpan,
) -> Result<TensorMembership> {
    Ok(tensor_membership_many(std::slice::from_ref(t), rels, span)?.remove(0))
}

/// Batch form of [`tensor_membership`]: one span serves every query.
pub fn tensor_membership_many(
    ts: &[TensorPoly],
    rels: &RelationSet,
    span: CertificateSpan,
) -> Result<Vec<TensorMembership>> {
    let mut words: BTreeSet<Word> = BTreeSet::new();
    for t in ts {
        leg_words(t, &mut words);
    }
    if words.is_empty() {
        return Ok(ts.iter().map(|_| TensorMembership::InIdeal(TensorCertificate::default())).collect());
    }
    let target_polys: Vec<NCPoly> = words.iter().map(|w| NCPoly::word(w.clone())).collect();
    let sp = IdealSpan::build(rels, span, &target_polys)?;
    let mut nf: HashMap<Word, (NCPoly, MembershipCertificate)> = HashMap::new();
    for w in &words {
        nf.insert(w.clone(), sp.reduce(&NCPoly::word(w.clone())));
    }
    Ok(ts.iter().map(|t| tensor_member(t, rels, &nf)).collect())
}

fn tensor_member(
    t: &TensorPoly,
    rels: &RelationSet,
    nf: &HashMap<Word, (NCPoly, MembershipCertificate)>,
) -> TensorMembership {
    if t.is_zero() {
        return TensorMembership::InIdeal(TensorCertificate::default());
    }
    let mut reduced = TensorPoly::zero();
    let by_right = t.by_right();
    for (y, xs) in &by_right {
        let mut nx = NCPoly::zero();
        for (x, c) in xs.terms() {
            nx.add_scaled(&nf[x].0, c);
        }
        reduced = reduced.add(&TensorPoly::simple(&nx, &nf[y].0));
    }
    if !reduced.is_zero() {
        return TensorMembership::NotFound;
    }
    let mut cert = TensorCertificate::default();
    for (y, xs) in &by_right {
        let mut lc = MembershipCertificate::default();
        let mut b = NCPoly::zero();
        for (x, c) in xs.terms() {
            lc = lc.combine(&Scalar::one(), &nf[x].1, c);
            b.add_scaled(&nf[x].0, c);
        }
        if !lc.is_empty() {
            cert.left.push((lc, y.clone()));
        }
        if !b.is_zero() && !nf[y].1.is_empty() {
            cert.right.push((b, nf[y].1.clone()));
        }
    }
    assert!(cert.verifies(rels, t), "tensor certificate failed to re-expand");
    TensorMembership::InIdeal(cert)
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &NCPoly, b: &NCPoly) -> NCPoly {
    a.mul(b).sub(&b.mul(a))
}

/// Result of testing all pairwise commutators.
#[derive(Clone, Debug, Default)]
pub struct CommutativityReport {
    pub pairs: usize,
    pub certificates: Vec<((Gen, Gen), MembershipCertificate)>,
    pub failing: Vec<(Gen, Gen)>,
}

impl CommutativityReport {
    pub fn all_commute(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Tests `[g, h] ∈ J_k` for every unordered pair of distinct letters.
pub fn check_commutative_letters(
    letters: &[Gen],
    rels: &RelationSet,
    span: CertificateSpan,
) -> Result<CommutativityReport> {
    let mut pairs = Vec::new();
    for (i, &g) in letters.iter().enumerate() {
        for &h in &letters[i + 1..] {
            if g != h {
                pairs.push((g, h));
            }
        }
    }
    let comms: Vec<NCPoly> =
        pairs.iter().map(|&(g, h)| commutator(&NCPoly::gen(g), &NCPoly::gen(h))).collect();
    let verdicts = membership_many(&comms, rels, span)?;
    let mut rep = CommutativityReport { pairs: pairs.len(), ..Default::default() };
    for (pair, v) in pairs.into_iter().zip(verdicts) {
        match v {
            Membership::InIdeal(c) => rep.certificates.push((pair, c)),
            Membership::NotFound => rep.failing.push(pair),
        }
    }
    Ok(rep)
}

/// Outcome of linear elimination: each removed base generator maps to its
/// expression; generators forced self-adjoint map to their self-adjoint form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Elimination {
    pub substitution: BTreeMap<Gen, NCPoly>,
    pub relations: RelationSet,
}

impl Elimination {
    /// Image of one letter under the substitution.
    pub fn image(&self, g: Gen) -> NCPoly {
        match self.substitution.get(&g.base()) {
            Some(e) if g.is_star() => e.star(),
            Some(e) => e.clone(),
            None => NCPoly::gen(g),
        }
    }

    pub fn apply(&self, p: &NCPoly) -> NCPoly {
        p.substitute(&mut |g| self.image(g))
    }

    pub fn is_identity(&self) -> bool {
        self.substitution.is_empty()
    }
}

fn is_linear(r: &NCPoly) -> bool {
    r.degree() == 1
}

/// Solves one linear relation for its largest base generator. Returns the
/// generator and its expression, or `None` when the relation is degenerate.
fn solve_linear(r: &NCPoly) -> Option<(Gen, NCPoly)> {
    let top = r.generators().into_iter().map(|g| g.base()).max()?;
    let g = NCPoly::gen(top);
    let gs = NCPoly::gen(top.star());
    let gw = Word::from_gens(&[top]);
    let gsw = Word::from_gens(&[top.star()]);
    let alpha = r.coeff(&gw);
    let beta = if top.is_self_adjoint() { Scalar::zero() } else { r.coeff(&gsw) };
    let rest = r.sub(&g.scale(&alpha)).sub(&gs.scale(&beta));
    if beta.is_zero() {
        return Some((top, rest.scale(&(-alpha.inv()))));
    }
    if alpha.is_zero() {
        return Some((top, rest.scale(&(-beta.inv())).star()));
    }
    let det = &(&alpha * &alpha.conj()) - &(&beta * &beta.conj());
    if det.is_zero() {
        if rest.is_zero() && (&alpha + &beta).is_zero() {
            return Some((top, NCPoly::gen(top.to_self_adjoint())));
        }
        return None;
    }
    let e = rest
        .scale(&-alpha.conj())
        .add(&rest.star().scale(&beta))
        .scale(&det.inv());
    Some((top, e))
}

/// Repeatedly solves degree-one relations for their largest base generator
/// and substitutes, until no solvable linear relation remains.
pub fn eliminate_linear(rels: &RelationSet) -> Result<Elimination> {
    let mut subst: BTreeMap<Gen, NCPoly> = BTreeMap::new();
    let mut current: Vec<NCPoly> = rels.iter().cloned().collect();
    let mut stuck: BTreeSet<NCPoly> = BTreeSet::new();
    loop {
        let mut best: Option<(Gen, NCPoly)> = None;
        let candidates: Vec<&NCPoly> =
            current.iter().filter(|r| is_linear(r) && !stuck.contains(*r)).collect();
        let mut degenerate = Vec::new();
        for r in candidates {
            match solve_linear(r) {
                Some((g, e)) => {
                    if best.as_ref().is_none_or(|(b, _)| g > *b) {
                        best = Some((g, e));
                    }
                }
                None => degenerate.push(r.clone()),
            }
        }
        stuck.extend(degenerate);
        let Some((g, e)) = best else { break };
        let image = |x: Gen| -> NCPoly {
            if x.base() == g {
                if x.is_star() { e.star() } else { e.clone() }
            } else {
                NCPoly::gen(x)
            }
        };
        for v in subst.values_mut() {
            *v = v.substitute(&mut |x| image(x));
        }
        subst.insert(g, e.clone());
        let mut next = Vec::new();
        for r in &current {
            let s = r.substitute(&mut |x| image(x));
            if s.is_zero() {
                continue;
            }
            if s.degree() == 0 {
                return Err(Error::InconsistentElimination(format!(
                    "relation {} reduces to the nonzero constant {}",
                    r, s
                )));
            }
            next.push(s);
        }
        current = RelationSet::new(next).rels;
        stuck = stuck.into_iter().map(|r| r.substitute(&mut |x| image(x))).collect();
    }
    Ok(Elimination { substitution: subst, relations: RelationSet::new(current) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrep::{relations_from_eq, GenMatrix};

    fn g(i: usize, j: usize) -> NCPoly {
        NCPoly::gen(Gen::u(i, j))
    }

    fn unitary(n: usize) -> RelationSet {
        let u = GenMatrix::generic(n, 0);
        let id = GenMatrix::identity(n);
        let mut r = relations_from_eq(&u.mul(&u.adjoint()).unwrap(), &id).unwrap();
        r.extend(relations_from_eq(&u.adjoint().mul(&u).unwrap(), &id).unwrap());
        RelationSet::new(r)
    }

    #[test]
    fn zero_is_always_a_member() {
        let m = membership(&NCPoly::zero(), &unitary(1), CertificateSpan::depth(0)).unwrap();
        assert_eq!(m, Membership::InIdeal(MembershipCertificate::default()));
    }

    #[test]
    fn one_by_one_unitary_commutes() {
        let rels = unitary(1);
        let c = commutator(&g(1, 1), &NCPoly::gen(Gen::u(1, 1).star()));
        let Membership::InIdeal(cert) = membership(&c, &rels, CertificateSpan::depth(1)).unwrap()
        else {
            panic!("expected a certificate")
        };
        assert!(cert.verifies(&rels, &c));
        let text = cert.to_string();
        let back = MembershipCertificate::parse(&text, &BTreeSet::new()).unwrap();
        assert!(back.verifies(&rels, &c));
    }

    #[test]
    fn free_unitary_entries_do_not_commute_at_depth_two() {
        let rels = unitary(2);
        let c = commutator(&g(1, 1), &g(1, 2));
        assert_eq!(membership(&c, &rels, CertificateSpan::depth(2)).unwrap(), Membership::NotFound);
    }

    #[test]
    fn tensor_identity_for_self_adjoint_relation() {
        let u = Gen::u(1, 1);
        let r = NCPoly::gen(u.star()).sub(&NCPoly::gen(u));
        let rels = RelationSet::new([r.clone()]);
        let us = NCPoly::gen(u.star());
        let uu = NCPoly::gen(u);
        let t = TensorPoly::simple(&us, &us).sub(&TensorPoly::simple(&uu, &uu));
        let v = tensor_membership(&t, &rels, CertificateSpan::depth(1)).unwrap();
        let TensorMembership::InIdeal(c) = v else { panic!("expected membership") };
        assert!(c.verifies(&rels, &t));
        let r1 = TensorPoly::simple(&r, &NCPoly::one());
        assert!(tensor_membership(&r1, &rels, CertificateSpan::depth(0)).unwrap().is_member());
    }

    #[test]
    fn star_closure_is_automatic() {
        let r = g(1, 2).mul(&g(2, 1)).sub(&NCPoly::one());
        let rels = RelationSet::new([r]);
        assert_eq!(rels.len(), 2);
        assert!(rels.is_star_closed());
    }

    #[test]
    fn elimination_without_linear_relations_is_identity() {
        let e = eliminate_linear(&unitary(2)).unwrap();
        assert!(e.is_identity());
        assert_eq!(e.relations, unitary(2));
    }

    #[test]
    fn partner_relation_makes_generator_self_adjoint() {
        let u = Gen::u(1, 1);
        let mut rels = unitary(1);
        rels.extend([NCPoly::gen(u).sub(&NCPoly::gen(u.star()))]);
        let e = eliminate_linear(&rels).unwrap();
        assert_eq!(e.image(u), NCPoly::gen(u.to_self_adjoint()));
        assert_eq!(e.image(u.star()), NCPoly::gen(u.to_self_adjoint()));
        assert!(e.relations.iter().all(|r| r.degree() == 2));
    }

    #[test]
    fn constant_contradiction_is_reported() {
        let a = g(1, 1).sub(&NCPoly::one());
        let b = g(1, 1).sub(&NCPoly::constant(Scalar::from_int(2)));
        let err = eliminate_linear(&RelationSet::new([a, b])).unwrap_err();
        assert!(matches!(err, Error::InconsistentElimination(_)));
    }
}
