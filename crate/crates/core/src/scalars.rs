//! The coefficient field: rational functions in a formal real parameter `s`
//! with Gaussian-rational coefficients. `q` is shorthand for `s^2`, so square
//! roots of `q` are available without any algebraic-number machinery.
//!
//! A [`Scalar`] is stored as `s^shift * num(s) / den(s)` where neither
//! polynomial is divisible by `s`, `den` is monic and `gcd(num, den) = 1`.
//! That form is unique, so structural equality is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact number `re + im*i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(r: BigRational) -> Self {
        GaussRat::new(r, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::from_ratio(&self.re * &o.re);
        }
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn neg(&self) -> Self {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.im.is_zero() {
            return GaussRat::from_ratio(self.re.recip());
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        GaussRat::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Sign used for printing: a coefficient is shown with a leading minus
    /// when it is a negative real or a negative multiple of `i`.
    fn displays_negative(&self) -> bool {
        (self.im.is_zero() && self.re.is_negative())
            || (self.re.is_zero() && self.im.is_negative())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    fn coeff_string(&self) -> String {
        if self.im.is_zero() {
            return self.re.to_string();
        }
        let imag = |b: &BigRational| {
            if b.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", b)
            }
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                return format!("-{}", imag(&-self.im.clone()));
            }
            return imag(&self.im);
        }
        if self.im.is_negative() {
            format!("({} - {})", self.re, imag(&-self.im.clone()))
        } else {
            format!("({} + {})", self.re, imag(&self.im))
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.coeff_string())
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // Large operands: scale down both by the same power of two first.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over GaussRat, ascending coefficients, trimmed.

type Poly = Vec<GaussRat>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn p_add(a: &[GaussRat], b: &[GaussRat]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(&mut out);
    out
}

fn p_neg(a: &[GaussRat]) -> Poly {
    a.iter().map(|c| c.neg()).collect()
}

fn p_mul(a: &[GaussRat], b: &[GaussRat]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

fn p_scale(a: &[GaussRat], c: &GaussRat) -> Poly {
    if c.is_one() {
        return a.to_vec();
    }
    let mut out: Poly = a.iter().map(|x| x.mul(c)).collect();
    trim(&mut out);
    out
}

fn p_shift(a: &[GaussRat], k: usize) -> Poly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussRat::zero(); k];
    out.extend_from_slice(a);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn p_divrem(a: &[GaussRat], b: &[GaussRat]) -> (Poly, Poly) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = b.last().expect("nonzero divisor").inv();
    let mut q = vec![GaussRat::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().unwrap().mul(&lead_inv);
        for (j, y) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&c.mul(y));
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn p_monic(a: &[GaussRat]) -> Poly {
    match a.last() {
        Some(l) if !l.is_one() => p_scale(a, &l.inv()),
        _ => a.to_vec(),
    }
}

fn p_gcd(a: &[GaussRat], b: &[GaussRat]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = p_divrem(&x, &y);
        x = y;
        y = r;
    }
    p_monic(&x)
}

fn p_eval(a: &[GaussRat], x: &GaussRat) -> GaussRat {
    let mut acc = GaussRat::zero();
    for c in a.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

fn p_is_one(a: &[GaussRat]) -> bool {
    a.len() == 1 && a[0].is_one()
}

// ---------------------------------------------------------------------------

/// An exact element of Q(i)(s).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    shift: i32,
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { shift: 0, num: Vec::new(), den: vec![GaussRat::one()] }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Scalar::from_gauss(GaussRat::from_ratio(r))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::from_ratio(BigRational::new(n.into(), d.into()))
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { shift: 0, num: vec![c], den: vec![GaussRat::one()] }
    }

    pub fn i() -> Self {
        Scalar::from_gauss(GaussRat::i())
    }

    /// `s^e` for any integer `e`.
    pub fn s_pow(e: i32) -> Self {
        Scalar { shift: e, num: vec![GaussRat::one()], den: vec![GaussRat::one()] }
    }

    pub fn s() -> Self {
        Scalar::s_pow(1)
    }

    pub fn q() -> Self {
        Scalar::s_pow(2)
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Scalar::s_pow(2 * e)
    }

    /// Builds the canonical representative of `s^shift * num / den`.
    fn make(mut shift: i32, mut num: Poly, mut den: Poly) -> Self {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Scalar::zero();
        }
        let lead_zeros = num.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            num.drain(..lead_zeros);
            shift += lead_zeros as i32;
        }
        let den_zeros = den.iter().take_while(|c| c.is_zero()).count();
        if den_zeros > 0 {
            den.drain(..den_zeros);
            shift -= den_zeros as i32;
        }
        if den.len() > 1 && num.len() > 1 {
            let g = p_gcd(&num, &den);
            if g.len() > 1 {
                num = p_divrem(&num, &g).0;
                den = p_divrem(&den, &g).0;
            }
        }
        let lead = den.last().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv();
            num = p_scale(&num, &inv);
            den = p_scale(&den, &inv);
        }
        Scalar { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && p_is_one(&self.num) && self.den.len() == 1
    }

    /// True when the value does not depend on `s`.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.shift == 0 && self.num.len() == 1 && self.den.len() == 1)
    }

    /// The Gaussian-rational value of a constant scalar.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        self.is_constant().then(|| self.num[0].clone())
    }

    /// True when the value is a Laurent polynomial in `s`.
    pub fn is_laurent(&self) -> bool {
        self.den.len() == 1
    }

    /// Canonical numerator as a polynomial in `s` (ascending coefficients).
    pub fn numerator(&self) -> Vec<GaussRat> {
        if self.shift > 0 {
            p_shift(&self.num, self.shift as usize)
        } else {
            self.num.clone()
        }
    }

    /// Canonical monic denominator as a polynomial in `s`.
    pub fn denominator(&self) -> Vec<GaussRat> {
        if self.shift < 0 && !self.is_zero() {
            p_shift(&self.den, (-self.shift) as usize)
        } else {
            self.den.clone()
        }
    }

    pub fn conj(&self) -> Self {
        if self.num.iter().all(|c| c.is_real()) && self.den.iter().all(|c| c.is_real()) {
            return self.clone();
        }
        Scalar {
            shift: self.shift,
            num: self.num.iter().map(|c| c.conj()).collect(),
            den: self.den.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.num.iter().all(|c| c.is_real()) && self.den.iter().all(|c| c.is_real())
    }

    pub fn neg(&self) -> Self {
        Scalar { shift: self.shift, num: p_neg(&self.num), den: self.den.clone() }
    }

    pub fn add_ref(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.shift.min(o.shift);
        let a = p_shift(&self.num, (self.shift - e) as usize);
        let b = p_shift(&o.num, (o.shift - e) as usize);
        if self.den == o.den {
            return Scalar::make(e, p_add(&a, &b), self.den.clone());
        }
        let num = p_add(&p_mul(&a, &o.den), &p_mul(&b, &self.den));
        Scalar::make(e, num, p_mul(&self.den, &o.den))
    }

    pub fn sub_ref(&self, o: &Scalar) -> Scalar {
        self.add_ref(&o.neg())
    }

    pub fn mul_ref(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.len() == 1 && o.den.len() == 1 {
            let num = p_mul(&self.num, &o.num);
            return Scalar { shift: self.shift + o.shift, num, den: vec![GaussRat::one()] };
        }
        Scalar::make(
            self.shift + o.shift,
            p_mul(&self.num, &o.num),
            p_mul(&self.den, &o.den),
        )
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn checked_inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::make(-self.shift, self.den.clone(), self.num.clone()))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("inverse of zero scalar")
    }

    pub fn div_ref(&self, o: &Scalar) -> Scalar {
        self.mul_ref(&o.inv())
    }

    pub fn pow(&self, e: i32) -> Scalar {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut k = e as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            k >>= 1;
        }
        acc
    }

    /// Exact substitution `s -> s0`.
    pub fn eval(&self, s0: &BigRational) -> Result<GaussRat> {
        if self.is_zero() {
            return Ok(GaussRat::zero());
        }
        let x = GaussRat::from_ratio(s0.clone());
        let den = p_eval(&self.den, &x);
        if den.is_zero() || (s0.is_zero() && self.shift < 0) {
            return Err(Error::PoleAtPoint { point: s0.to_string() });
        }
        let mut v = p_eval(&self.num, &x).div(&den);
        if self.shift != 0 {
            let mut p = GaussRat::one();
            for _ in 0..self.shift.unsigned_abs() {
                p = p.mul(&x);
            }
            v = if self.shift > 0 { v.mul(&p) } else { v.div(&p) };
        }
        Ok(v)
    }

    /// Floating point value at a real `s`, used only by numeric checks.
    pub fn eval_f64(&self, s0: f64) -> (f64, f64) {
        let ev = |p: &Poly| {
            let mut re = 0.0;
            let mut im = 0.0;
            for c in p.iter().rev() {
                let (a, b) = c.to_f64();
                re = re * s0 + a;
                im = im * s0 + b;
            }
            (re, im)
        };
        let (nr, ni) = ev(&self.num);
        let (dr, di) = ev(&self.den);
        let d2 = dr * dr + di * di;
        let (mut re, mut im) = ((nr * dr + ni * di) / d2, (ni * dr - nr * di) / d2);
        let f = s0.powi(self.shift);
        re *= f;
        im *= f;
        (re, im)
    }

    /// Image under the ring map sending `s` to `s0` and `i` to `iota` in
    /// the prime field of order `p`. `None` when a denominator vanishes.
    pub fn to_fp(&self, p: u64, s0: u64, iota: u64) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        let ev = |poly: &Poly| -> Option<u64> {
            let mut acc = 0u64;
            for c in poly.iter().rev() {
                let v = gauss_to_fp(c, p, iota)?;
                acc = fp_add(fp_mul(acc, s0, p), v, p);
            }
            Some(acc)
        };
        let n = ev(&self.num)?;
        let d = ev(&self.den)?;
        if d == 0 || s0 == 0 && self.shift < 0 {
            return None;
        }
        let mut v = fp_mul(n, fp_inv(d, p), p);
        let sp = fp_pow(s0, self.shift.unsigned_abs() as u64, p);
        v = if self.shift >= 0 { fp_mul(v, sp, p) } else { fp_mul(v, fp_inv(sp, p), p) };
        Some(v)
    }

    /// Total order used only to make output deterministic (never semantic).
    pub fn canonical_cmp(&self, o: &Scalar) -> Ordering {
        self.to_string().cmp(&o.to_string())
    }

    fn laurent_string(shift: i32, poly: &[GaussRat]) -> String {
        let mut out = String::new();
        let mut first = true;
        for (k, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = shift + k as i32;
            let neg = c.displays_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            let term = term_string(&mag, e);
            if first {
                if neg {
                    out.push('-');
                }
                out.push_str(&term);
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        if first {
            out.push('0');
        }
        out
    }
}

fn monomial_string(e: i32) -> String {
    if e % 2 == 0 {
        match e / 2 {
            1 => "q".to_string(),
            k => format!("q^{}", k),
        }
    } else {
        match e {
            1 => "s".to_string(),
            k => format!("s^{}", k),
        }
    }
}

fn term_string(c: &GaussRat, e: i32) -> String {
    if e == 0 {
        return c.coeff_string();
    }
    if c.is_one() {
        return monomial_string(e);
    }
    format!("{}*{}", c.coeff_string(), monomial_string(e))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 {
            return f.write_str(&Scalar::laurent_string(self.shift, &self.num));
        }
        write!(
            f,
            "({})/({})",
            Scalar::laurent_string(self.shift, &self.num),
            Scalar::laurent_string(0, &self.den)
        )
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$f(o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$f(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
    };
}

scalar_binop!(Add, add, add_ref);
scalar_binop!(Sub, sub, sub_ref);
scalar_binop!(Mul, mul, mul_ref);
scalar_binop!(Div, div, div_ref);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = self.add_ref(o);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = self.sub_ref(o);
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = self.add_ref(&o);
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self = self.sub_ref(&o);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = self.mul_ref(o);
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// `[n]_q = (q^n - q^-n) / (q - q^-1)`, reduced to its Laurent form.
pub fn qnumber(n: u32) -> Scalar {
    assert!(n >= 1, "qnumber needs n >= 1");
    let q = Scalar::q();
    let num = q.pow(n as i32) - q.pow(-(n as i32));
    let den = &q - q.inv();
    num / den
}

// ---------------------------------------------------------------------------
// Prime-field helpers for reducing scalars modulo a prime.

pub(crate) fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, a, p);
        }
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow(a, p - 2, p)
}

fn bigint_to_fp(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().expect("reduced residue fits")
}

fn gauss_to_fp(c: &GaussRat, p: u64, iota: u64) -> Option<u64> {
    let part = |r: &BigRational| -> Option<u64> {
        let d = bigint_to_fp(r.denom(), p);
        if d == 0 {
            return None;
        }
        Some(fp_mul(bigint_to_fp(r.numer(), p), fp_inv(d, p), p))
    };
    let re = part(&c.re)?;
    let im = part(&c.im)?;
    Some(fp_add(re, fp_mul(im, iota, p), p))
}

// ---------------------------------------------------------------------------
// Parsing.

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { col: self.pos + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                let col = self.pos + 1;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::Parse { col, msg: "division by zero".into() });
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i32> {
        let paren = self.eat(b'(');
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let n = self.integer()?;
        if paren {
            self.expect(b')')?;
        }
        let Some(v) = n.to_i32() else {
            return self.err("exponent too large");
        };
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let col = self.pos + 1;
            let e = self.exponent()?;
            if e < 0 && base.is_zero() {
                return Err(Error::Parse { col, msg: "negative power of zero".into() });
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(Scalar::from_ratio(BigRational::from_integer(
                self.integer()?,
            ))),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"i" => Ok(Scalar::i()),
                    b"s" => Ok(Scalar::s()),
                    b"q" => Ok(Scalar::q()),
                    other => {
                        self.pos = start;
                        self.err(format!(
                            "unknown symbol '{}'",
                            String::from_utf8_lossy(other)
                        ))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(())
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let mut p = Parser::new(s);
        let v = p.expr()?;
        p.finish()?;
        Ok(v)
    }
}

// ---------------------------------------------------------------------------

/// Dense matrix of scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ScalarMatrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Scalar::one());
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = ScalarMatrix::zeros(n, n);
        for (k, e) in entries.iter().enumerate() {
            m.set(k, k, e.clone());
        }
        m
    }

    /// Matrix unit `e_ij` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = ScalarMatrix::zeros(n, n);
        m.set(i, j, Scalar::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix literal".into()));
        }
        Ok(ScalarMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from integer entries.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        ScalarMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(),
        )
        .expect("rectangular literal")
    }

    /// The second Pauli matrix `[[0, -i], [i, 0]]`.
    pub fn sigma2() -> Self {
        let mut m = ScalarMatrix::zeros(2, 2);
        m.set(0, 1, -Scalar::i());
        m.set(1, 0, Scalar::i());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data.iter().enumerate().map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn mul(&self, o: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = ScalarMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, o: &ScalarMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch("entrywise operation".into()));
        }
        Ok(ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &ScalarMatrix) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &ScalarMatrix) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|x| x * c)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        ScalarMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut out = ScalarMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            out.set(j, i, v.clone());
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    pub fn kron(&self, o: &ScalarMatrix) -> Self {
        let mut out = ScalarMatrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for (i, j, a) in self.entries() {
            if a.is_zero() {
                continue;
            }
            for (k, l, b) in o.entries() {
                if !b.is_zero() {
                    out.set(i * o.rows + k, j * o.cols + l, a * b);
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &ScalarMatrix) -> Self {
        let mut out = ScalarMatrix::zeros(self.rows + o.rows, self.cols + o.cols);
        for (i, j, a) in self.entries() {
            out.set(i, j, a.clone());
        }
        for (i, j, b) in o.entries() {
            out.set(self.rows + i, self.cols + j, b.clone());
        }
        out
    }

    /// Square sub-block starting at `(off, off)`.
    pub fn block(&self, off: usize, n: usize) -> Self {
        let mut out = ScalarMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(off + i, off + j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, v)| i == j || v.is_zero())
    }

    /// True for `c * I`.
    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        self.is_square()
            && self.is_diagonal()
            && (0..self.rows).all(|k| self.get(k, k) == self.get(0, 0))
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv();
            for r in c + 1..n {
                let f = a.get(r, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a.get(r, k) - &(&f * a.get(c, k));
                    a.set(r, k, v);
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<ScalarMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = ScalarMatrix::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Err(Error::Singular(format!("{}", self)));
            };
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pinv = a.get(c, c).inv();
            for k in 0..n {
                a.set(c, k, a.get(c, k) * &pinv);
                inv.set(c, k, inv.get(c, k) * &pinv);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    a.set(r, k, a.get(r, k) - &(&f * a.get(c, k)));
                    inv.set(r, k, inv.get(r, k) - &(&f * inv.get(c, k)));
                }
            }
        }
        Ok(inv)
    }

    /// Parses `[[a, b], [c, d]]` with entries in the scalar grammar.
    pub fn parse(text: &str) -> Result<ScalarMatrix> {
        let mut p = Parser::new(text);
        p.expect(b'[')?;
        let mut rows = Vec::new();
        loop {
            p.expect(b'[')?;
            let mut row = Vec::new();
            loop {
                row.push(p.expr()?);
                if p.eat(b',') {
                    continue;
                }
                p.expect(b']')?;
                break;
            }
            if let Some(first) = rows.first() {
                let first: &Vec<Scalar> = first;
                if first.len() != row.len() {
                    return p.err("rows of different lengths");
                }
            }
            rows.push(row);
            if p.eat(b',') {
                continue;
            }
            p.expect(b']')?;
            break;
        }
        p.finish()?;
        ScalarMatrix::from_rows(rows)
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarMatrix{}", self)
    }
}
