//! Precision-tracked Laurent series in F_q((T^{-1})).
//!
//! A value stores the coefficients it knows, from its leading degree down to a
//! valuation floor. Coefficients strictly below the floor are unknown; `floor =
//! None` means every unlisted coefficient is zero (the value is a finite sum).
//! Queries that would need an unknown coefficient fail instead of guessing.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::degree::Degree;
use super::field::{Field, Fq};
use super::parse::format_terms;
use super::poly::Poly;
use super::ratfn::RatFn;
use crate::error::{Error, Result};

/// Relative precision used when inverting a finite non-monomial sum.
pub const DEFAULT_INV_PRECISION: i64 = 64;

/// Eventually periodic digit tail: digits at degrees `<= start` repeat with `length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Period {
    pub start: i64,
    pub length: i64,
}

#[derive(Debug, Clone)]
struct Source {
    value: RatFn,
    period: Option<Period>,
}

#[derive(Clone)]
pub struct Laurent {
    field: Field,
    /// Degree of `coeffs[0]`; meaningless when `coeffs` is empty.
    lead: i64,
    /// Coefficients at degrees `lead, lead-1, ...`; first and last entries nonzero.
    coeffs: Vec<Fq>,
    floor: Option<i64>,
    source: Option<Arc<Source>>,
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Laurent {
    /// Build from dense coefficients at degrees `top, top-1, ...`, normalizing.
    pub fn from_dense(field: &Field, top: i64, coeffs: Vec<Fq>, floor: Option<i64>) -> Laurent {
        let mut coeffs = coeffs;
        if let Some(f) = floor {
            let keep = (top - f + 1).max(0) as usize;
            coeffs.truncate(keep);
        }
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        let mut coeffs = coeffs.split_off(skip.min(coeffs.len()));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = if coeffs.is_empty() { 0 } else { top - skip as i64 };
        Laurent { field: field.clone(), lead, coeffs, floor, source: None }
    }

    /// Build from sparse `(degree, coefficient)` terms.
    pub fn from_terms(field: &Field, terms: &[(i64, Fq)], floor: Option<i64>) -> Laurent {
        let nz: Vec<_> = terms.iter().filter(|(_, c)| !c.is_zero()).collect();
        if nz.is_empty() {
            return Laurent::from_dense(field, 0, Vec::new(), floor);
        }
        let top = nz.iter().map(|t| t.0).max().unwrap();
        let bot = nz.iter().map(|t| t.0).min().unwrap();
        let mut dense = vec![Fq::ZERO; (top - bot + 1) as usize];
        for &&(d, c) in &nz {
            let i = (top - d) as usize;
            dense[i] = field.add(dense[i], c);
        }
        Laurent::from_dense(field, top, dense, floor)
    }

    pub fn zero(field: &Field) -> Laurent {
        Laurent::from_dense(field, 0, Vec::new(), None)
    }

    pub fn one(field: &Field) -> Laurent {
        Laurent::monomial(field, Fq::ONE, 0)
    }

    /// A value known only to vanish at every degree `>= floor`.
    pub fn ambiguous_zero(field: &Field, floor: i64) -> Laurent {
        Laurent::from_dense(field, 0, Vec::new(), Some(floor))
    }

    pub fn monomial(field: &Field, c: Fq, k: i64) -> Laurent {
        Laurent::from_dense(field, k, vec![c], None)
    }

    /// `T^k`.
    pub fn t_pow(field: &Field, k: i64) -> Laurent {
        Laurent::monomial(field, Fq::ONE, k)
    }

    pub fn from_poly(p: &Poly) -> Laurent {
        let coeffs: Vec<Fq> = p.coeffs().iter().rev().copied().collect();
        let top = p.deg_usize().map_or(0, |d| d as i64);
        Laurent::from_dense(p.field(), top, coeffs, None)
    }

    /// Expansion of `f` known down to `floor`.
    ///
    /// Long division in `T^{-1}` is driven by the exact remainder, so a repeated
    /// remainder certifies the period of the digit tail; the exact rational value
    /// is recorded with the expansion.
    pub fn from_rational(f: &RatFn, floor: i64) -> Result<Laurent> {
        let field = f.field().clone();
        let (poly, frac) = f.split();
        let den = frac.den().clone();
        let mut out = Laurent::from_poly(&poly);
        let mut period = None;
        if !frac.is_zero() {
            let dd = den.deg_usize().expect("nonzero denominator");
            let mut rem = frac.num().clone();
            let mut seen: HashMap<Vec<Fq>, i64> = HashMap::new();
            let mut digits: Vec<(i64, Fq)> = Vec::new();
            let mut k = -1i64;
            let mut exact = false;
            loop {
                if rem.is_zero() {
                    exact = true;
                    break;
                }
                if period.is_none() {
                    if let Some(&prev) = seen.get(rem.coeffs()) {
                        period = Some(Period { start: prev, length: prev - k });
                    } else {
                        seen.insert(rem.coeffs().to_vec(), k);
                    }
                }
                if k < floor {
                    break;
                }
                rem = rem.shl(1);
                let c = rem.coeff(dd);
                if !c.is_zero() {
                    rem.add_scaled_shifted(&den, field.neg(c), 0);
                }
                digits.push((k, c));
                k -= 1;
            }
            let fl = if exact { None } else { Some(floor) };
            let tail = Laurent::from_terms(&field, &digits, fl);
            out = Laurent::from_poly(&poly).add(&tail);
            if exact {
                period = None;
            }
        }
        out.source = Some(Arc::new(Source { value: f.clone(), period }));
        Ok(out)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `None` when the value is a finite sum (exact).
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// True when no coefficient at or above the floor is nonzero.
    pub fn is_known_zero_above_floor(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.floor.is_none()
    }

    /// Degree of the value; `-inf` for an exact zero.
    pub fn degree(&self) -> Result<Degree> {
        if !self.coeffs.is_empty() {
            Ok(Degree::Finite(self.lead))
        } else {
            match self.floor {
                None => Ok(Degree::NegInf),
                Some(f) => Err(Error::AmbiguousZero { floor: f }),
            }
        }
    }

    /// Best known upper bound on the degree: the degree itself when resolvable,
    /// `floor - 1` for an ambiguous zero.
    pub fn degree_bound(&self) -> Degree {
        match self.degree() {
            Ok(d) => d,
            Err(_) => Degree::Finite(self.floor.unwrap() - 1),
        }
    }

    /// Lowest listed degree (the last nonzero known coefficient).
    pub fn lowest(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lead - self.coeffs.len() as i64 + 1)
        }
    }

    /// Coefficient at degree `k`; fails below the floor.
    pub fn coeff(&self, k: i64) -> Result<Fq> {
        if let Some(f) = self.floor {
            if k < f {
                return Err(Error::PrecisionExhausted(format!("coefficient of T^{k} below floor {f}")));
            }
        }
        Ok(self.get(k))
    }

    #[inline]
    fn get(&self, k: i64) -> Fq {
        if self.coeffs.is_empty() || k > self.lead {
            return Fq::ZERO;
        }
        self.coeffs.get((self.lead - k) as usize).copied().unwrap_or(Fq::ZERO)
    }

    /// Nonzero known terms, highest degree first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.lead - i as i64, c))
    }

    /// Exact rational value, when known.
    pub fn rational(&self) -> Option<RatFn> {
        if let Some(s) = &self.source {
            return Some(s.value.clone());
        }
        if self.floor.is_some() {
            return None;
        }
        let field = &self.field;
        let Some(low) = self.lowest() else {
            return Some(RatFn::zero(field));
        };
        let shift = (-low).max(0);
        let mut coeffs = vec![Fq::ZERO; (self.lead + shift + 1).max(0) as usize];
        for (d, c) in self.terms() {
            coeffs[(d + shift) as usize] = c;
        }
        let num = Poly::from_coeffs(field, coeffs);
        let den = Poly::monomial(field, Fq::ONE, shift as usize);
        RatFn::new(num, den).ok()
    }

    /// Period of the digit tail recorded by [`Laurent::from_rational`].
    pub fn period(&self) -> Option<Period> {
        self.source.as_ref().and_then(|s| s.period)
    }

    /// Forget every coefficient below `floor` (never increases precision).
    pub fn with_floor(&self, floor: i64) -> Laurent {
        let fl = max_floor(self.floor, Some(floor));
        let mut out = Laurent::from_dense(&self.field, self.lead, self.coeffs.clone(), fl);
        if out.floor == self.floor {
            out.source = self.source.clone();
        }
        out
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            field: self.field.clone(),
            lead: self.lead + k,
            coeffs: self.coeffs.clone(),
            floor: self.floor.map(|f| f + k),
            source: None,
        }
    }

    pub fn neg(&self) -> Laurent {
        let f = &self.field;
        Laurent {
            field: f.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            floor: self.floor,
            source: None,
        }
    }

    pub fn scale(&self, c: Fq) -> Laurent {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(a, c)).collect();
        Laurent::from_dense(f, self.lead, coeffs, self.floor)
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        debug_assert!(self.field == o.field);
        let floor = max_floor(self.floor, o.floor);
        let hi = match (self.lowest(), o.lowest()) {
            (None, None) => return Laurent::from_dense(&self.field, 0, Vec::new(), floor),
            (Some(_), None) => self.lead,
            (None, Some(_)) => o.lead,
            (Some(_), Some(_)) => self.lead.max(o.lead),
        };
        let lo_known = [self.lowest(), o.lowest()].into_iter().flatten().min().unwrap();
        let lo = floor.map_or(lo_known, |f| lo_known.max(f));
        if lo > hi {
            return Laurent::from_dense(&self.field, 0, Vec::new(), floor);
        }
        let f = &self.field;
        let coeffs = (lo..=hi).rev().map(|k| f.add(self.get(k), o.get(k))).collect();
        Laurent::from_dense(f, hi, coeffs, floor)
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        debug_assert!(self.field == o.field);
        let ua = self.degree_bound().finite();
        let ub = o.degree_bound().finite();
        // every error term a_known*b_unknown, a_unknown*b_known, a_unknown*b_unknown
        let mut floor: Option<i64> = None;
        let mut bump = |x: Option<i64>| {
            if let Some(v) = x {
                floor = Some(floor.map_or(v, |f: i64| f.max(v)));
            }
        };
        if let (Some(u), Some(fb)) = (ua, o.floor) {
            bump(Some(u + fb));
        }
        if let (Some(fa), Some(u)) = (self.floor, ub) {
            bump(Some(fa + u));
        }
        if let (Some(fa), Some(fb)) = (self.floor, o.floor) {
            bump(Some(fa + fb - 1));
        }
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Laurent::from_dense(&self.field, 0, Vec::new(), floor);
        }
        let f = &self.field;
        let top = self.lead + o.lead;
        let bottom_known = self.lowest().unwrap() + o.lowest().unwrap();
        let bottom = floor.map_or(bottom_known, |fl| bottom_known.max(fl));
        if bottom > top {
            return Laurent::from_dense(f, 0, Vec::new(), floor);
        }
        let len = (top - bottom + 1) as usize;
        let mut out = vec![Fq::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            let max_j = (len - i).min(o.coeffs.len());
            for (j, &b) in o.coeffs[..max_j].iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Laurent::from_dense(f, top, out, floor)
    }

    pub fn mul_poly(&self, p: &Poly) -> Laurent {
        self.mul(&Laurent::from_poly(p))
    }

    /// Multiplicative inverse with the precision implied by the operand:
    /// relative precision `lead - floor` carries over, so the result floor is
    /// `floor - 2*lead`. Finite non-monomial sums use [`DEFAULT_INV_PRECISION`].
    pub fn inv(&self) -> Result<Laurent> {
        let d = match self.degree()? {
            Degree::NegInf => return Err(Error::DivisionByZero),
            Degree::Finite(d) => d,
        };
        let target = match self.floor {
            Some(f) => f - 2 * d,
            None => -d - DEFAULT_INV_PRECISION,
        };
        self.inv_to(target)
    }

    /// Inverse known down to `max(target, floor - 2*lead)`.
    pub fn inv_to(&self, target: i64) -> Result<Laurent> {
        let la = match self.degree()? {
            Degree::NegInf => return Err(Error::DivisionByZero),
            Degree::Finite(d) => d,
        };
        let f = &self.field;
        if self.floor.is_none() && self.coeffs.len() == 1 {
            return Ok(Laurent::monomial(f, f.inv(self.coeffs[0])?, -la));
        }
        let floor = match self.floor {
            Some(fa) => target.max(fa - 2 * la),
            None => target,
        };
        let k_max = -la - floor;
        if k_max < 0 {
            return Ok(Laurent::ambiguous_zero(f, floor));
        }
        let a = &self.coeffs;
        let inv0 = f.inv(a[0])?;
        let mut b: Vec<Fq> = Vec::with_capacity(k_max as usize + 1);
        b.push(inv0);
        for k in 1..=k_max as usize {
            let mut s = Fq::ZERO;
            for j in 1..=k.min(a.len() - 1) {
                s = f.mul_add(s, a[j], b[k - j]);
            }
            b.push(f.neg(f.mul(s, inv0)));
        }
        Ok(Laurent::from_dense(f, -la, b, Some(floor)))
    }

    pub fn div(&self, o: &Laurent) -> Result<Laurent> {
        let lb = match o.degree()? {
            Degree::NegInf => return Err(Error::DivisionByZero),
            Degree::Finite(d) => d,
        };
        if o.is_exact() && o.coeffs.len() > 1 {
            let want = match (self.floor, self.lowest()) {
                (Some(fa), _) => fa - lb,
                (None, Some(low)) => low - lb - DEFAULT_INV_PRECISION,
                (None, None) => return Ok(Laurent::zero(&self.field)),
            };
            let ua = self.degree_bound().finite().unwrap_or(0);
            return Ok(self.mul(&o.inv_to(want - ua)?));
        }
        Ok(self.mul(&o.inv()?))
    }

    /// Part with degrees `>= 0`; needs every such coefficient to be known.
    pub fn polynomial_part(&self) -> Result<Poly> {
        self.scaled_integer_part(0)
    }

    /// Polynomial part of `T^shift * self`, i.e. the digits at degrees `>= -shift`.
    pub fn scaled_integer_part(&self, shift: i64) -> Result<Poly> {
        if let Some(f) = self.floor {
            if f > -shift {
                return Err(Error::PrecisionExhausted(format!(
                    "digits down to T^{} needed, known only to T^{f}",
                    -shift
                )));
            }
        }
        if self.coeffs.is_empty() || self.lead + shift < 0 {
            return Ok(Poly::zero(&self.field));
        }
        let top = (self.lead + shift) as usize;
        let mut coeffs = vec![Fq::ZERO; top + 1];
        for (d, c) in self.terms() {
            let e = d + shift;
            if e >= 0 {
                coeffs[e as usize] = c;
            }
        }
        Ok(Poly::from_coeffs(&self.field, coeffs))
    }

    /// Part with degrees `< 0`, keeping the floor.
    pub fn fractional_part(&self) -> Laurent {
        let terms: Vec<(i64, Fq)> = self.terms().filter(|t| t.0 < 0).collect();
        Laurent::from_terms(&self.field, &terms, self.floor)
    }
}

impl PartialEq for Laurent {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.floor == o.floor
            && self.coeffs == o.coeffs
            && (self.coeffs.is_empty() || self.lead == o.lead)
    }
}

impl Eq for Laurent {}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_terms(&self.field, self.terms());
        match self.floor {
            None => f.write_str(&s),
            Some(fl) if self.coeffs.is_empty() => write!(f, "O(T^{})", fl - 1),
            Some(fl) => write!(f, "{s} + O(T^{})", fl - 1),
        }
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl serde::Serialize for Laurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn mono(f: &Field, k: i64) -> Laurent {
        Laurent::t_pow(f, k)
    }

    #[test]
    fn degree_cases() {
        let f = f2();
        assert_eq!(Laurent::zero(&f).degree(), Ok(Degree::NegInf));
        let a = mono(&f, 3).add(&Laurent::one(&f));
        assert_eq!(a.degree(), Ok(Degree::Finite(3)));
        assert_eq!(Laurent::ambiguous_zero(&f, -10).degree(), Err(Error::AmbiguousZero { floor: -10 }));
        assert_eq!(Laurent::ambiguous_zero(&f, -10).degree_bound(), Degree::Finite(-11));
    }

    #[test]
    fn characteristic_two_cancellation() {
        let f = f2();
        let a = mono(&f, 1).add(&Laurent::one(&f));
        assert_eq!(a.add(&mono(&f, 1)), Laurent::one(&f));
    }

    #[test]
    fn inverse_and_product() {
        let f = f2();
        assert_eq!(mono(&f, 1).inv().unwrap(), mono(&f, -1));
        let a = mono(&f, -1).add(&mono(&f, -2));
        assert_eq!(a.mul(&mono(&f, 1)), Laurent::one(&f).add(&mono(&f, -1)));
    }

    #[test]
    fn mul_floor_tracks_unknown_digits() {
        let f = f2();
        // (T + O(T^-5)) * (T^2 + O(T^-3)): T * O(T^-3) leaves T^-2 unknown
        let a = mono(&f, 1).with_floor(-4);
        let b = mono(&f, 2).with_floor(-2);
        let c = a.mul(&b);
        assert_eq!(c.floor(), Some(-1));
        assert_eq!(c.degree(), Ok(Degree::Finite(3)));
    }

    #[test]
    fn inexact_inverse_floor() {
        let f = f2();
        // (T + 1 + O(T^-5)): lead 1, floor -4 -> inverse floor -4 - 2 = -6
        let a = mono(&f, 1).add(&Laurent::one(&f)).with_floor(-4);
        let b = a.inv().unwrap();
        assert_eq!(b.floor(), Some(-6));
        let prod = a.mul(&b);
        assert_eq!(prod.degree(), Ok(Degree::Finite(0)));
        assert!(prod.sub(&Laurent::one(&f)).is_known_zero_above_floor());
    }

    #[test]
    fn from_rational_examples() {
        let f = f2();
        let one = Poly::one(&f);
        let t = Poly::t(&f);
        let a = Laurent::from_rational(&RatFn::new(one.clone(), t.clone()).unwrap(), -4).unwrap();
        assert_eq!(a, mono(&f, -1));
        assert!(a.is_exact());

        let b = RatFn::new(Poly::from_ints(&f, &[1, 0, 1]), t.clone()).unwrap();
        let b = Laurent::from_rational(&b, -4).unwrap();
        assert_eq!(b, mono(&f, 1).add(&mono(&f, -1)));

        let c = RatFn::new(one.clone(), Poly::from_ints(&f, &[1, 1])).unwrap();
        let cl = Laurent::from_rational(&c, -4).unwrap();
        let expect = Laurent::from_terms(
            &f,
            &[(-1, Fq::ONE), (-2, Fq::ONE), (-3, Fq::ONE), (-4, Fq::ONE)],
            Some(-4),
        );
        assert_eq!(cl, expect);
        assert_eq!(cl.period(), Some(Period { start: -1, length: 1 }));
        assert_eq!(cl.rational(), Some(c));
    }

    #[test]
    fn polynomial_part_needs_digits() {
        let f = f2();
        let a = mono(&f, 2).with_floor(1);
        assert!(matches!(a.polynomial_part(), Err(Error::PrecisionExhausted(_))));
        let b = mono(&f, 2).add(&mono(&f, -3));
        assert_eq!(b.polynomial_part().unwrap(), Poly::t(&f).pow(2));
        assert_eq!(b.fractional_part(), mono(&f, -3));
    }

    #[test]
    fn exact_rational_roundtrip() {
        let f = Field::prime(3).unwrap();
        let a = mono(&f, 2).add(&mono(&f, -2).scale(f.from_int(2)));
        let r = a.rational().unwrap();
        assert_eq!(Laurent::from_rational(&r, -10).unwrap(), a);
    }
}
