//! Rational functions F_q(T) in canonical form.

use std::fmt;

use super::degree::Degree;
use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if num.is_zero() {
            return Ok(RatFn { den: Poly::one(num.field()), num });
        }
        let g = num.gcd(&den);
        let (n, _) = num.divmod(&g)?;
        let (d, _) = den.divmod(&g)?;
        let u = n.field().inv(d.lc())?;
        Ok(RatFn { num: n.scale(u), den: d.scale(u) })
    }

    pub fn from_poly(p: Poly) -> RatFn {
        let one = Poly::one(p.field());
        RatFn { num: p, den: one }
    }

    pub fn zero(field: &Field) -> RatFn {
        RatFn::from_poly(Poly::zero(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num - deg den`, the logarithm of `|num/den|`.
    pub fn deg(&self) -> Degree {
        match (self.num.deg(), self.den.deg()) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a - b),
            _ => Degree::NegInf,
        }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFn::new(num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn> {
        Ok(self.mul(&o.inv()?))
    }

    /// Polynomial part and proper fractional part.
    pub fn split(&self) -> (Poly, RatFn) {
        let (q, r) = self.num.divmod(&self.den).expect("nonzero denominator");
        (q, RatFn { num: r, den: self.den.clone() })
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.deg() == Degree::Finite(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}
