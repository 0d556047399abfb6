//! Polynomials over F_q: the ring Λ = F_q[T].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use super::degree::Degree;
use super::field::{Field, Fq};
use super::parse::format_terms;
use crate::error::{Error, Result};

/// Element of F_q[T]; `coeffs[k]` is the coefficient of `T^k`, with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fq::ONE)
    }

    pub fn constant(field: &Field, c: Fq) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    /// `c * T^k`.
    pub fn monomial(field: &Field, c: Fq, k: usize) -> Poly {
        let mut coeffs = vec![Fq::ZERO; k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(field, coeffs)
    }

    /// The indeterminate `T`.
    pub fn t(field: &Field) -> Poly {
        Poly::monomial(field, Fq::ONE, 1)
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Convenience constructor from integer coefficients (reduced mod p), low degree first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Uniformly random polynomial of degree at most `max_deg` (possibly zero).
    pub fn random<R: Rng + ?Sized>(field: &Field, max_deg: usize, rng: &mut R) -> Poly {
        let coeffs = (0..=max_deg).map(|_| Fq(rng.gen_range(0..field.q()))).collect();
        Poly::from_coeffs(field, coeffs)
    }

    /// The polynomial whose base-q digits (low degree first) spell `index`.
    pub fn from_index(field: &Field, mut index: u64) -> Poly {
        let q = field.q() as u64;
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push(Fq((index % q) as u32));
            index /= q;
        }
        Poly::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fq> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Finite(self.coeffs.len() as i64 - 1)
        }
    }

    /// Degree as an index, `None` for zero.
    pub fn deg_usize(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Fq {
        self.coeffs.get(k).copied().unwrap_or(Fq::ZERO)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn scale(&self, c: Fq) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Multiply by `T^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fq::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lc()) {
            Ok(inv) => self.scale(inv),
            Err(_) => self.clone(),
        }
    }

    /// Euclidean division: `self = b*quot + rem` with `deg rem < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field != b.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lc = f.inv(b.lc())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fq::ZERO; rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + db], inv_lc);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &bc) in b.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, bc));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (qt, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&qt * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&qt * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(r0.lc()) {
            Ok(u) => (r0.scale(u), s0.scale(u), t0.scale(u)),
            Err(_) => (r0, s0, t0),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self + c * T^k * other`, in place.
    pub fn add_scaled_shifted(&mut self, other: &Poly, c: Fq, k: usize) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let f = &self.field;
        let need = other.coeffs.len() + k;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, Fq::ZERO);
        }
        for (j, &oc) in other.coeffs.iter().enumerate() {
            if !oc.is_zero() {
                self.coeffs[j + k] = f.add(self.coeffs[j + k], f.mul(c, oc));
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_coeffs(f, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_coeffs(f, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![Fq::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Poly::from_coeffs(f, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| (k as i64, c));
        f.write_str(&format_terms(&self.field, terms))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
