//! Exact nonnegative numbers of the form `r * q^e` with `r`, `e` rational.
//!
//! Haar measures are rationals, and absolute values raised to a rational
//! exponent `κ` (so `α = κ ln q`) are rational powers of `q`. Comparison is
//! exact: both sides are raised to the common exponent denominator.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Equality is numeric: `1/2 * 2^1 == 1 * 2^0`.
#[derive(Debug, Clone)]
pub struct QPow {
    q: u32,
    coeff: BigRational,
    exp: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn pow_int(base: &BigRational, e: &BigInt) -> BigRational {
    let mut out = BigRational::one();
    let mut b = if e.is_negative() { base.recip() } else { base.clone() };
    let mut k = e.abs();
    let two = BigInt::from(2);
    while !k.is_zero() {
        if (&k % &two).is_one() {
            out *= &b;
        }
        b = &b * &b;
        k /= &two;
    }
    out
}

impl QPow {
    pub fn new(q: u32, coeff: BigRational, exp: BigRational) -> QPow {
        assert!(!coeff.is_negative(), "QPow is nonnegative");
        let exp = if coeff.is_zero() { BigRational::zero() } else { exp };
        QPow { q, coeff, exp }
    }

    pub fn rational(q: u32, r: BigRational) -> QPow {
        QPow::new(q, r, BigRational::zero())
    }

    pub fn q_pow(q: u32, e: BigRational) -> QPow {
        QPow::new(q, BigRational::one(), e)
    }

    pub fn zero(q: u32) -> QPow {
        QPow::rational(q, BigRational::zero())
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn exp(&self) -> &BigRational {
        &self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, o: &QPow) -> QPow {
        QPow::new(self.q, &self.coeff * &o.coeff, &self.exp + &o.exp)
    }

    /// Division by a nonzero value.
    pub fn div(&self, o: &QPow) -> QPow {
        QPow::new(self.q, &self.coeff / &o.coeff, &self.exp - &o.exp)
    }

    /// Move integer powers of `q` into the coefficient so the exponent lies in `[0, 1)`.
    pub fn normalized(&self) -> QPow {
        if self.is_zero() {
            return self.clone();
        }
        let whole = self.exp.floor();
        let c = &self.coeff * pow_int(&BigRational::from_integer(BigInt::from(self.q)), whole.numer());
        QPow { q: self.q, coeff: c, exp: &self.exp - whole }
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        c * (self.q as f64).powf(self.exp.to_f64().unwrap_or(f64::NAN))
    }
}

impl PartialEq for QPow {
    fn eq(&self, o: &QPow) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for QPow {}

impl PartialOrd for QPow {
    fn partial_cmp(&self, o: &QPow) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QPow {
    fn cmp(&self, o: &QPow) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // c1 q^e1 vs c2 q^e2  <=>  (c1/c2)^v vs q^u  with (e2 - e1) = u/v
        let d = &o.exp - &self.exp;
        let ratio = &self.coeff / &o.coeff;
        let lhs = pow_int(&ratio, d.denom());
        let rhs = pow_int(&BigRational::from_integer(BigInt::from(self.q)), d.numer());
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for QPow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        if n.exp.is_zero() {
            write!(f, "{}", rat_string(&n.coeff))
        } else {
            write!(f, "{}*{}^({})", rat_string(&n.coeff), self.q, rat_string(&n.exp))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compares_across_exponents() {
        let a = QPow::q_pow(2, rat(1, 2));
        let b = QPow::rational(2, rat(3, 2));
        let c = QPow::rational(2, rat(7, 5));
        assert!(a < b);
        assert!(a > c);
        assert_eq!(QPow::new(2, rat(1, 4), rat(2, 1)), QPow::new(2, rat(1, 4), rat(2, 1)));
        assert_eq!(QPow::new(2, rat(1, 4), rat(2, 1)).cmp(&QPow::rational(2, rat(1, 1))), Ordering::Equal);
        assert!(QPow::zero(2) < QPow::q_pow(2, rat(-50, 1)));
    }

    #[test]
    fn display_normalizes() {
        assert_eq!(QPow::new(2, rat(1, 1), rat(5, 2)).to_string(), "4/1*2^(1/2)");
        assert_eq!(QPow::new(3, rat(1, 9), rat(2, 1)).to_string(), "1/1");
    }
}
