use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qpow::rat_string;

use super::cells::BallSpec;

/// Rational bounds `lo < e < hi` from the first `terms` terms of `sum 1/i!`.
fn e_bounds(terms: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for i in 0..terms {
        if i > 0 {
            fact *= i;
        }
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    // tail after n terms is below 2/n!
    let tail = BigRational::new(BigInt::from(2), fact * terms);
    (sum.clone(), sum + tail)
}

/// Compare `e^k` with `c > 0` exactly.
fn cmp_e_pow(k: i64, c: &BigRational) -> Ordering {
    if k == 0 {
        return BigRational::one().cmp(c);
    }
    let mut terms = 20;
    loop {
        let (lo, hi) = e_bounds(terms);
        let a = k.unsigned_abs() as usize;
        let (plo, phi) = (num_traits::pow(lo, a), num_traits::pow(hi, a));
        // e^k vs c  <=>  e^|k| vs c (k > 0)  or  1 vs c e^|k| (k < 0)
        let (l, h, target) = if k > 0 {
            (plo, phi, c.clone())
        } else {
            (c * plo, c * phi, BigRational::one())
        };
        let ord = if h < target {
            Some(Ordering::Less)
        } else if l > target {
            Some(Ordering::Greater)
        } else {
            None
        };
        if let Some(o) = ord {
            return if k > 0 { o } else { o.reverse() };
        }
        terms *= 2;
    }
}

/// `floor(ln c)` for a positive rational, computed exactly.
pub fn floor_ln(c: &BigRational) -> Result<i64> {
    if !c.is_positive() {
        return Err(Error::InvalidInput("dilation factor must be positive".into()));
    }
    let mut k = c.to_f64().map_or(0.0, f64::ln).floor() as i64;
    while cmp_e_pow(k, c) == Ordering::Greater {
        k -= 1;
    }
    while cmp_e_pow(k + 1, c) != Ordering::Greater {
        k += 1;
    }
    Ok(k)
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingReport {
    pub factor: String,
    /// `nu(cB) / nu(B)` per ball, with `nu` Haar measure on the support ball.
    pub ratios: Vec<String>,
    pub d_max: String,
}

/// Haar measure of `b` inside the support ball `s`.
fn restricted_measure(b: &BallSpec, s: &BallSpec, q: u32) -> BigRational {
    if b.is_inside(s) {
        b.measure(q)
    } else if s.is_inside(b) {
        s.measure(q)
    } else {
        BigRational::zero()
    }
}

/// Doubling ratios `nu(cB) / nu(B)` for `nu` the Haar measure on `support`.
pub fn doubling_check(balls: &[BallSpec], c_factor: &BigRational, support: &BallSpec, q: u32) -> Result<DoublingReport> {
    let mut ratios = Vec::new();
    let mut d_max = BigRational::zero();
    for b in balls {
        let cb = b.dilate(c_factor)?;
        let num = restricted_measure(&cb, support, q);
        let den = restricted_measure(b, support, q);
        if den.is_zero() {
            return Err(Error::InvalidInput("ball does not meet the support".into()));
        }
        let r = num / den;
        if r > d_max {
            d_max = r.clone();
        }
        ratios.push(rat_string(&r));
    }
    Ok(DoublingReport { factor: rat_string(c_factor), ratios, d_max: rat_string(&d_max) })
}
