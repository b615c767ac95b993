//! The free unital *-algebra on matrix-indexed generators, its tensor
//! square, and the structure maps (coproduct, counit, Kac antipode).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Generator family. `U` entries are `u[i,j]`, `A` entries are the
/// quantum-automorphism generators `a^{kl}_{ij}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    U,
    A,
}

/// A generator packed into one word so that integer order is declaration
/// order: family, block, row, column, then the star partner right after its
/// base generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(u64);

const STAR_BIT: u64 = 0b10;
const SA_BIT: u64 = 0b01;

impl Gen {
    fn pack(letter: Letter, block: u16, row: u16, col: u16, star: bool, sa: bool) -> Gen {
        let l = match letter {
            Letter::U => 0u64,
            Letter::A => 1u64,
        };
        assert!(block < 4096, "block index too large");
        Gen(l << 60
            | (block as u64) << 48
            | (row as u64) << 32
            | (col as u64) << 16
            | if star { STAR_BIT } else { 0 }
            | if sa { SA_BIT } else { 0 })
    }

    /// `u[i,j]` in an unnamed single-block presentation (1-based indices).
    pub fn u(i: usize, j: usize) -> Gen {
        Gen::ub(0, i, j)
    }

    /// `u[b:i,j]`, the entry of free-product block `b` (1-based; 0 means none).
    pub fn ub(block: usize, i: usize, j: usize) -> Gen {
        Gen::pack(Letter::U, block as u16, i as u16, j as u16, false, false)
    }

    /// `a^{kl}_{ij}` with optional block labels `x` (upper) and `y` (lower);
    /// pass 0 for both in the single-block case. Indices are 1-based, < 16.
    pub fn aut(x: usize, k: usize, l: usize, y: usize, i: usize, j: usize) -> Gen {
        assert!(k < 16 && l < 16 && i < 16 && j < 16 && x < 256 && y < 256);
        let row = (x << 8 | k << 4 | l) as u16;
        let col = (y << 8 | i << 4 | j) as u16;
        Gen::pack(Letter::A, 0, row, col, false, false)
    }

    pub fn letter(self) -> Letter {
        if self.0 >> 60 == 0 {
            Letter::U
        } else {
            Letter::A
        }
    }

    pub fn block(self) -> usize {
        ((self.0 >> 48) & 0xfff) as usize
    }

    pub fn row(self) -> usize {
        ((self.0 >> 32) & 0xffff) as usize
    }

    pub fn col(self) -> usize {
        ((self.0 >> 16) & 0xffff) as usize
    }

    pub fn is_star(self) -> bool {
        self.0 & STAR_BIT != 0
    }

    pub fn is_self_adjoint(self) -> bool {
        self.0 & SA_BIT != 0
    }

    /// The star partner (itself when self-adjoint).
    pub fn star(self) -> Gen {
        if self.is_self_adjoint() {
            self
        } else {
            Gen(self.0 ^ STAR_BIT)
        }
    }

    /// The base (unstarred) generator.
    pub fn base(self) -> Gen {
        Gen(self.0 & !STAR_BIT)
    }

    /// The self-adjoint variant of this generator's base.
    pub fn to_self_adjoint(self) -> Gen {
        Gen((self.0 & !STAR_BIT) | SA_BIT)
    }

    /// The plain (non-self-adjoint, unstarred) variant.
    pub fn plain(self) -> Gen {
        Gen(self.0 & !(STAR_BIT | SA_BIT))
    }

    /// Same entry moved into free-product block `b`.
    pub fn in_block(self, b: usize) -> Gen {
        assert!(self.letter() == Letter::U, "only u-generators are block-namespaced");
        Gen((self.0 & !(0xfffu64 << 48)) | (b as u64) << 48)
    }

    /// Same family and block with row and column exchanged.
    pub fn transposed(self) -> Gen {
        let flags = self.0 & (STAR_BIT | SA_BIT);
        let head = self.0 & !(0xffff_ffffu64 << 16) & !(STAR_BIT | SA_BIT);
        Gen(head | (self.col() as u64) << 32 | (self.row() as u64) << 16 | flags)
    }

    /// Counit value on the free algebra: diagonal entries go to 1.
    pub fn counit(self) -> bool {
        self.row() == self.col()
    }

    /// Decodes `a`-generator indices as `((x,k,l),(y,i,j))`.
    pub fn aut_indices(self) -> ((usize, usize, usize), (usize, usize, usize)) {
        let r = self.row();
        let c = self.col();
        ((r >> 8, (r >> 4) & 15, r & 15), (c >> 8, (c >> 4) & 15, c & 15))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = if self.is_star() { "*" } else { "" };
        match self.letter() {
            Letter::U => {
                if self.block() == 0 {
                    write!(f, "u{}[{},{}]", star, self.row(), self.col())
                } else {
                    write!(f, "u{}[{}:{},{}]", star, self.block(), self.row(), self.col())
                }
            }
            Letter::A => {
                let ((x, k, l), (y, i, j)) = self.aut_indices();
                if x == 0 && y == 0 {
                    write!(f, "a{}[{},{};{},{}]", star, k, l, i, j)
                } else {
                    write!(f, "a{}[{}:{},{};{}:{},{}]", star, x, k, l, y, i, j)
                }
            }
        }
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)?;
        if self.is_self_adjoint() {
            f.write_str("(sa)")?;
        }
        Ok(())
    }
}

/// A monomial; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub SmallVec<[Gen; 4]>);

impl Word {
    pub fn one() -> Word {
        Word(SmallVec::new())
    }

    pub fn from_gens(g: &[Gen]) -> Word {
        Word(SmallVec::from_slice(g))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn concat3(a: &Word, b: &Word, c: &Word) -> Word {
        let mut v = SmallVec::with_capacity(a.len() + b.len() + c.len());
        v.extend_from_slice(&a.0);
        v.extend_from_slice(&b.0);
        v.extend_from_slice(&c.0);
        Word(v)
    }

    /// Reverses the word and stars each letter.
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.star()).collect())
    }

    /// All words of exactly `d` letters over `alphabet`, in increasing order
    /// when the alphabet is sorted.
    pub fn all_of_degree(alphabet: &[Gen], d: usize) -> Vec<Word> {
        let mut out = vec![Word::one()];
        for _ in 0..d {
            let mut next = Vec::with_capacity(out.len() * alphabet.len());
            for w in &out {
                for &g in alphabet {
                    let mut v = w.0.clone();
                    v.push(g);
                    next.push(Word(v));
                }
            }
            out = next;
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", g)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A noncommutative polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        NCPoly::monomial(c, Word::one())
    }

    pub fn gen(g: Gen) -> Self {
        NCPoly::monomial(Scalar::one(), Word::from_gens(&[g]))
    }

    pub fn word(w: Word) -> Self {
        NCPoly::monomial(Scalar::one(), w)
    }

    pub fn monomial(c: Scalar, w: Word) -> Self {
        let mut p = NCPoly::zero();
        if !c.is_zero() {
            p.terms.insert(w, c);
        }
        p
    }

    /// Builds from `(coefficient, word)` pairs, merging repeated words.
    pub fn from_terms(it: impl IntoIterator<Item = (Scalar, Word)>) -> Self {
        let mut p = NCPoly::zero();
        for (c, w) in it {
            p.add_term(w, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Largest word with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Word::one())
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }

    pub fn add_assign(&mut self, o: &NCPoly) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), c);
        }
    }

    /// `self += c * a * self_word * b` style accumulation helper.
    pub fn add_scaled(&mut self, o: &NCPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &o.terms {
            self.add_term(w.clone(), &(x * c));
        }
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.concat(b), &(x * y));
            }
        }
        out
    }

    /// `left * self * right` for words.
    pub fn sandwich(&self, left: &Word, right: &Word) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (Word::concat3(left, w, right), c.clone()))
                .collect(),
        }
    }

    /// Antilinear antihomomorphic involution.
    pub fn star(&self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.star(), c.conj())).collect() }
    }

    /// The set of generators (with star flags) occurring in the polynomial.
    pub fn generators(&self) -> BTreeSet<Gen> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }

    /// Applies an algebra homomorphism given on letters.
    pub fn substitute(&self, f: &mut impl FnMut(Gen) -> NCPoly) -> NCPoly {
        let mut cache: HashMap<Gen, NCPoly> = HashMap::new();
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(c.clone());
            for g in w.gens() {
                let img = cache.entry(*g).or_insert_with(|| f(*g));
                acc = acc.mul(img);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Maps every coefficient (e.g. conjugation or specialization).
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    /// Rescales so that the leading coefficient is one.
    pub fn monic(&self) -> NCPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    /// Parses the canonical text form, e.g. `(q)*u[1,1].u*[2,1] + (-1)*1`.
    /// Generators listed in `self_adjoint` are read as self-adjoint.
    pub fn parse(text: &str, self_adjoint: &BTreeSet<Gen>) -> Result<NCPoly> {
        parse_poly(text, self_adjoint)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})*{}", c, w)?;
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Ord for NCPoly {
    fn cmp(&self, o: &Self) -> Ordering {
        let a = self.terms().rev();
        let b = o.terms().rev();
        for (x, y) in a.zip(b) {
            let c = x.0.cmp(y.0).then_with(|| x.1.canonical_cmp(y.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.len().cmp(&o.len())
    }
}

impl PartialOrd for NCPoly {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl FromStr for Gen {
    type Err = Error;

    fn from_str(text: &str) -> Result<Gen> {
        parse_gen(text.trim(), 1)
    }
}

fn parse_gen(text: &str, col: usize) -> Result<Gen> {
    let err = |msg: &str| Error::Parse { col, msg: format!("{}: '{}'", msg, text) };
    let (head, rest) = text.split_once('[').ok_or_else(|| err("expected '['"))?;
    let inner = rest.strip_suffix(']').ok_or_else(|| err("expected ']'"))?;
    let (letter, star) = match head {
        "u" => (Letter::U, false),
        "u*" => (Letter::U, true),
        "a" => (Letter::A, false),
        "a*" => (Letter::A, true),
        _ => return Err(err("unknown generator family")),
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| err("bad index"));
    let g = match letter {
        Letter::U => {
            let (block, pos) = match inner.split_once(':') {
                Some((b, p)) => (num(b)?, p),
                None => (0, inner),
            };
            let (i, j) = pos.split_once(',').ok_or_else(|| err("expected 'i,j'"))?;
            Gen::ub(block, num(i)?, num(j)?)
        }
        Letter::A => {
            let (upper, lower) = inner.split_once(';').ok_or_else(|| err("expected ';'"))?;
            let side = |t: &str| -> Result<(usize, usize, usize)> {
                let (b, pos) = match t.split_once(':') {
                    Some((b, p)) => (num(b)?, p),
                    None => (0, t),
                };
                let (k, l) = pos.split_once(',').ok_or_else(|| err("expected 'k,l'"))?;
                Ok((b, num(k)?, num(l)?))
            };
            let (x, k, l) = side(upper)?;
            let (y, i, j) = side(lower)?;
            Gen::aut(x, k, l, y, i, j)
        }
    };
    Ok(if star { g.star() } else { g })
}

fn parse_poly(text: &str, self_adjoint: &BTreeSet<Gen>) -> Result<NCPoly> {
    let t = text.trim();
    if t == "0" {
        return Ok(NCPoly::zero());
    }
    let bytes = t.as_bytes();
    let mut out = NCPoly::zero();
    let mut pos = 0;
    let offset = text.len() - text.trim_start().len();
    loop {
        if bytes.get(pos) != Some(&b'(') {
            return Err(Error::Parse { col: offset + pos + 1, msg: "expected '('".into() });
        }
        let mut depth = 0;
        let mut end = pos;
        for (k, &b) in bytes.iter().enumerate().skip(pos) {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        end = k;
                        break;
                    }
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse { col: offset + pos + 1, msg: "unbalanced '('".into() });
        }
        let coeff: Scalar = t[pos + 1..end].parse().map_err(|e| match e {
            Error::Parse { col, msg } => Error::Parse { col: offset + pos + 1 + col, msg },
            other => other,
        })?;
        pos = end + 1;
        if bytes.get(pos) != Some(&b'*') {
            return Err(Error::Parse { col: offset + pos + 1, msg: "expected '*'".into() });
        }
        pos += 1;
        let stop = t[pos..].find(" + ").map_or(t.len(), |k| pos + k);
        let word_text = &t[pos..stop];
        let word = if word_text == "1" {
            Word::one()
        } else {
            let mut gens = SmallVec::new();
            let mut col = offset + pos + 1;
            for part in word_text.split('.') {
                let g = parse_gen(part, col)?;
                let g = if self_adjoint.contains(&g.plain()) { g.to_self_adjoint() } else { g };
                gens.push(g);
                col += part.len() + 1;
            }
            Word(gens)
        };
        out.add_term(word, &coeff);
        if stop == t.len() {
            break;
        }
        pos = stop + 3;
    }
    Ok(out)
}

/// An element of the algebraic tensor square.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorPoly {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly::default()
    }

    pub fn one() -> Self {
        TensorPoly::simple(&NCPoly::one(), &NCPoly::one())
    }

    /// `p ⊗ r`.
    pub fn simple(p: &NCPoly, r: &NCPoly) -> Self {
        let mut t = TensorPoly::zero();
        for (a, x) in p.terms() {
            for (b, y) in r.terms() {
                t.add_term(a.clone(), b.clone(), &(x * y));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add(&self, o: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(a.clone(), b.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &TensorPoly) -> TensorPoly {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        if c.is_zero() {
            return TensorPoly::zero();
        }
        TensorPoly { terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac⊗bd`.
    pub fn mul(&self, o: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &o.terms {
                out.add_term(a.concat(c), b.concat(d), &(x * y));
            }
        }
        out
    }

    /// `star ⊗ star` with coefficient conjugation.
    pub fn star(&self) -> TensorPoly {
        TensorPoly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((a.star(), b.star()), c.conj()))
                .collect(),
        }
    }

    /// `(ε ⊗ id)`.
    pub fn counit_left(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for ((a, b), c) in &self.terms {
            if word_counit(a) {
                out.add_term(b.clone(), c);
            }
        }
        out
    }

    /// `(id ⊗ ε)`.
    pub fn counit_right(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for ((a, b), c) in &self.terms {
            if word_counit(b) {
                out.add_term(a.clone(), c);
            }
        }
        out
    }

    /// Left components grouped by right word.
    pub fn by_right(&self) -> BTreeMap<Word, NCPoly> {
        let mut m: BTreeMap<Word, NCPoly> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            m.entry(b.clone()).or_default().add_term(a.clone(), c);
        }
        m
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})*{}@{}", c, a, b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn word_counit(w: &Word) -> bool {
    w.gens().iter().all(|g| g.counit())
}

/// What the structure maps need to know about a presentation.
pub trait HopfData {
    fn name(&self) -> &str;
    /// Coproduct of a single letter (base or starred).
    fn delta_gen(&self, g: Gen) -> Result<TensorPoly>;
    /// Antipode image of a single letter, for Kac presentations.
    fn antipode_gen(&self, g: Gen) -> Result<NCPoly>;
    fn is_kac(&self) -> bool;
}

/// The matrix coproduct extended multiplicatively.
pub fn coproduct(p: &NCPoly, pres: &impl HopfData) -> Result<TensorPoly> {
    let mut cache: HashMap<Gen, TensorPoly> = HashMap::new();
    let mut out = TensorPoly::zero();
    for (w, c) in p.terms() {
        let mut acc = TensorPoly::one().scale(c);
        for g in w.gens() {
            if !cache.contains_key(g) {
                cache.insert(*g, pres.delta_gen(*g)?);
            }
            acc = acc.mul(&cache[g]);
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// Counit on the free algebra: `ε(u_ij) = δ_ij`, unital, fixes scalars.
pub fn counit(p: &NCPoly) -> Scalar {
    let mut acc = Scalar::zero();
    for (w, c) in p.terms() {
        if word_counit(w) {
            acc += c;
        }
    }
    acc
}

/// The Kac antipode `S(u_ij) = u_ji°`, extended as an antihomomorphism.
pub fn antipode_kac(p: &NCPoly, pres: &impl HopfData) -> Result<NCPoly> {
    if !pres.is_kac() {
        return Err(Error::NotKacTagged(pres.name().to_string()));
    }
    let mut cache: HashMap<Gen, NCPoly> = HashMap::new();
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        let mut acc = NCPoly::constant(c.clone());
        for g in w.gens().iter().rev() {
            if !cache.contains_key(g) {
                cache.insert(*g, pres.antipode_gen(*g)?);
            }
            acc = acc.mul(&cache[g]);
        }
        out.add_assign(&acc);
    }
    Ok(out)
}

/// A bare `n x n` matrix coalgebra on `u[i,j]`, handy for tests and for
/// presentations that have not been assembled yet.
pub struct FreeMatrixCoalgebra {
    pub n: usize,
    pub block: usize,
    pub kac: bool,
}

impl HopfData for FreeMatrixCoalgebra {
    fn name(&self) -> &str {
        "free"
    }

    fn delta_gen(&self, g: Gen) -> Result<TensorPoly> {
        if g.letter() != Letter::U || g.block() != self.block || g.row() > self.n || g.col() > self.n
        {
            return Err(Error::UnknownGenerator(g.to_string()));
        }
        let mut t = TensorPoly::zero();
        let base = g.base();
        for k in 1..=self.n {
            let a = Gen::ub(self.block, base.row(), k);
            let b = Gen::ub(self.block, k, base.col());
            let (a, b) = if g.is_self_adjoint() {
                (a.to_self_adjoint(), b.to_self_adjoint())
            } else {
                (a, b)
            };
            t.add_term(Word::from_gens(&[a]), Word::from_gens(&[b]), &Scalar::one());
        }
        Ok(if g.is_star() { t.star() } else { t })
    }

    fn antipode_gen(&self, g: Gen) -> Result<NCPoly> {
        Ok(NCPoly::gen(g.transposed().star()))
    }

    fn is_kac(&self) -> bool {
        self.kac
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: usize, j: usize) -> NCPoly {
        NCPoly::gen(Gen::u(i, j))
    }
    fn us(i: usize, j: usize) -> NCPoly {
        NCPoly::gen(Gen::u(i, j).star())
    }

    #[test]
    fn star_reverses_and_conjugates() {
        let p = u(1, 1).mul(&u(1, 2));
        assert_eq!(p.star(), us(1, 2).mul(&us(1, 1)));
        let w = u(2, 1).scale(&Scalar::i());
        assert_eq!(w.star(), us(2, 1).scale(&-Scalar::i()));
        let r = u(1, 1).scale(&Scalar::q()).add(&us(2, 1).mul(&u(2, 2)));
        assert_eq!(r.star().star(), r);
    }

    #[test]
    fn canonical_text_form() {
        let p = u(1, 1).mul(&us(2, 1)).scale(&Scalar::q()).sub(&NCPoly::one());
        assert_eq!(p.to_string(), "(q)*u[1,1].u*[2,1] + (-1)*1");
        let back = NCPoly::parse(&p.to_string(), &BTreeSet::new()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn generator_order_puts_star_after_base() {
        let mut v = vec![Gen::u(1, 2), Gen::u(1, 1).star(), Gen::u(1, 1), Gen::u(2, 1)];
        v.sort();
        assert_eq!(v, vec![Gen::u(1, 1), Gen::u(1, 1).star(), Gen::u(1, 2), Gen::u(2, 1)]);
    }

    #[test]
    fn coproduct_of_generators() {
        let c = FreeMatrixCoalgebra { n: 2, block: 0, kac: true };
        let d = coproduct(&u(1, 1), &c).unwrap();
        let expect = TensorPoly::simple(&u(1, 1), &u(1, 1)).add(&TensorPoly::simple(&u(1, 2), &u(2, 1)));
        assert_eq!(d, expect);
        let ds = coproduct(&us(1, 1), &c).unwrap();
        let expect_s = TensorPoly::simple(&us(1, 1), &us(1, 1)).add(&TensorPoly::simple(&us(1, 2), &us(2, 1)));
        assert_eq!(ds, expect_s);
        assert_eq!(coproduct(&NCPoly::one(), &c).unwrap(), TensorPoly::one());
    }

    #[test]
    fn counit_examples() {
        let r = u(1, 1).mul(&us(1, 1)).add(&u(1, 2).mul(&us(1, 2))).sub(&NCPoly::one());
        assert!(counit(&r).is_zero());
        assert!(counit(&NCPoly::one()).is_one());
        assert!(counit(&u(1, 2)).is_zero());
    }

    #[test]
    fn antipode_examples() {
        let c = FreeMatrixCoalgebra { n: 2, block: 0, kac: true };
        assert_eq!(antipode_kac(&u(1, 2), &c).unwrap(), us(2, 1));
        assert_eq!(antipode_kac(&u(1, 1).mul(&u(1, 2)), &c).unwrap(), us(2, 1).mul(&us(1, 1)));
        let nk = FreeMatrixCoalgebra { n: 2, block: 0, kac: false };
        assert!(matches!(antipode_kac(&u(1, 2), &nk), Err(Error::NotKacTagged(_))));
    }

    #[test]
    fn aut_generator_round_trip() {
        let g = Gen::aut(0, 1, 2, 0, 2, 1);
        assert_eq!(g.to_string(), "a[1,2;2,1]");
        assert!(!g.counit());
        let h = Gen::aut(1, 2, 2, 2, 2, 2).star();
        assert_eq!(h.to_string(), "a*[1:2,2;2:2,2]");
        let p = NCPoly::gen(h).add(&NCPoly::gen(g));
        assert_eq!(NCPoly::parse(&p.to_string(), &BTreeSet::new()).unwrap(), p);
    }
}
