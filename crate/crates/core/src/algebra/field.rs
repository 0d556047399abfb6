//! Finite fields F_q, q = p^r, as F_p[u]/(modulus).
//!
//! Elements are encoded as integers in `0..q` whose base-`p` digits are the
//! coefficients in the basis `1, u, ..., u^{r-1}`. Fields with `q <= 256` carry
//! precomputed addition and multiplication tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of a finite field, encoded as its index in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const TABLE_LIMIT: u32 = 256;

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// Static description of F_q.
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus, coefficients from degree 0 up to degree `r`; empty for prime fields.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Cheaply clonable handle to a finite field.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.r == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}[u]/({:?})", self.0.p, self.0.modulus)
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic `m` over F_p (coefficient vectors, low degree first).
fn poly_rem_fp(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lc = *r.last().unwrap() % p64;
        let shift = r.len() - 1 - dm;
        if lc != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let t = (lc * mc as u64) % p64;
                r[shift + i] = (r[shift + i] + p64 - t) % p64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible_fp(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                div.push((x % p as u64) as u32);
                x /= p as u64;
            }
            div.push(1);
            let mut rem = poly_rem_fp(m, &div, p);
            trim(&mut rem);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.r as usize);
        let mut x = a;
        for _ in 0..self.r {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    fn neg_raw(&self, a: u32) -> u32 {
        if self.r == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.undigits(&d)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut rem = poly_rem_fp(&prod, &self.modulus, self.p);
        rem.resize(self.r as usize, 0);
        self.undigits(&rem)
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv_raw(&self, a: u32) -> u32 {
        // a^(q-2) in the multiplicative group of order q-1
        self.pow_raw(a, self.q as u64 - 2)
    }

    fn build_tables(&mut self) {
        if self.q > TABLE_LIMIT {
            return;
        }
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            neg[a] = self.neg_raw(a as u32) as u16;
            if a != 0 {
                inv[a] = self.inv_raw(a as u32) as u16;
            }
            for b in 0..q {
                add[a * q + b] = self.add_raw(a as u32, b as u32) as u16;
                mul[a * q + b] = self.mul_raw(a as u32, b as u32) as u16;
            }
        }
        self.tables = Some(Tables { add, mul, neg, inv });
    }
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > 1 << 16 {
            return Err(Error::InvalidField(format!("characteristic {p} too large")));
        }
        let mut spec = FieldSpec { p, r: 1, q: p, modulus: Vec::new(), tables: None };
        spec.build_tables();
        Ok(Field(Arc::new(spec)))
    }

    /// F_p[u]/(modulus). `modulus` is given low degree first and must be monic and
    /// irreducible of degree `r >= 2`; degree 1 collapses to the prime field.
    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut m = modulus;
        trim(&mut m);
        if m.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if m.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let r = (m.len() - 1) as u32;
        if r == 1 {
            return Field::prime(p);
        }
        let q = (p as u64).checked_pow(r).filter(|&q| q <= 1 << 16).ok_or_else(|| {
            Error::InvalidField(format!("q = {p}^{r} too large"))
        })? as u32;
        if !is_irreducible_fp(&m, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let mut spec = FieldSpec { p, r, q, modulus: m, tables: None };
        spec.build_tables();
        Ok(Field(Arc::new(spec)))
    }

    /// Built-in fields for q in {2, 3, 4, 5, 7, 8, 9}; other primes are accepted too.
    pub fn builtin(q: u32) -> Result<Field> {
        match q {
            4 => Field::extension(2, vec![1, 1, 1]),
            8 => Field::extension(2, vec![1, 1, 0, 1]),
            9 => Field::extension(3, vec![1, 0, 1]),
            16 => Field::extension(2, vec![1, 1, 0, 0, 1]),
            27 => Field::extension(3, vec![1, 2, 0, 1]),
            25 => Field::extension(5, vec![2, 0, 1]),
            _ if is_prime(q) => Field::prime(q),
            _ => Err(Error::InvalidField(format!("no built-in field of order {q}"))),
        }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }

    /// Element with the given index in `0..q`.
    pub fn elem(&self, idx: u32) -> Result<Fq> {
        if idx < self.0.q {
            Ok(Fq(idx))
        } else {
            Err(Error::CoefficientOutOfRange { value: idx.to_string() })
        }
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with basis coordinates `c_0, ..., c_{r-1}`.
    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fq> {
        if c.len() > self.0.r as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::CoefficientOutOfRange { value: format!("{c:?}") });
        }
        Ok(Fq(self.0.undigits(c)))
    }

    /// Basis coordinates of `a`.
    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        self.0.digits(a.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        match &self.0.tables {
            Some(t) => Fq(t.add[(a.0 * self.0.q + b.0) as usize] as u32),
            None => Fq(self.0.add_raw(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        match &self.0.tables {
            Some(t) => Fq(t.neg[a.0 as usize] as u32),
            None => Fq(self.0.neg_raw(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        match &self.0.tables {
            Some(t) => Fq(t.mul[(a.0 * self.0.q + b.0) as usize] as u32),
            None => Fq(self.0.mul_raw(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.tables {
            Some(t) => Fq(t.inv[a.0 as usize] as u32),
            None => Fq(self.0.inv_raw(a.0)),
        })
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `acc + a*b`, the inner step of every convolution.
    #[inline]
    pub fn mul_add(&self, acc: Fq, a: Fq, b: Fq) -> Fq {
        self.add(acc, self.mul(a, b))
    }

    /// Literal form of an element: decimal for prime fields, `[c0,...]` otherwise.
    pub fn format_elem(&self, a: Fq) -> String {
        if self.is_prime_field() {
            a.0.to_string()
        } else {
            let c = self.coeffs(a);
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }
}
