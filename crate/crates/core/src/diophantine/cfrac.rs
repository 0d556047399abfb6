use serde::Serialize;

use crate::algebra::{Degree, Laurent, Poly, RatFn};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CfStop {
    Terminated,
    MaxTerms,
    PrecisionExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct CFExpansion {
    pub partial_quotients: Vec<Poly>,
    /// `(p_k, q_k)` for `k = 0..=K`.
    pub convergents: Vec<(Poly, Poly)>,
    pub terminated: bool,
    pub stop: CfStop,
}

impl CFExpansion {
    fn from_quotients(quotients: Vec<Poly>, stop: CfStop) -> CFExpansion {
        let mut convergents: Vec<(Poly, Poly)> = Vec::with_capacity(quotients.len());
        if let Some(a0) = quotients.first() {
            let f = a0.field().clone();
            let (mut pm, mut qm) = (Poly::one(&f), Poly::zero(&f));
            let (mut pk, mut qk) = (a0.clone(), Poly::one(&f));
            convergents.push((pk.clone(), qk.clone()));
            for a in &quotients[1..] {
                let pn = &(a * &pk) + &pm;
                let qn = &(a * &qk) + &qm;
                pm = std::mem::replace(&mut pk, pn);
                qm = std::mem::replace(&mut qk, qn);
                convergents.push((pk.clone(), qk.clone()));
            }
        }
        CFExpansion { partial_quotients: quotients, convergents, terminated: stop == CfStop::Terminated, stop }
    }

    /// Last convergent as a rational function.
    pub fn last_convergent(&self) -> Option<RatFn> {
        let (p, q) = self.convergents.last()?;
        RatFn::new(p.clone(), q.clone()).ok()
    }
}

/// Continued fraction expansion. Inputs with a known rational value are
/// expanded exactly; other series stop when a quotient would need unknown digits.
pub fn cf_expand(y: &Laurent, max_terms: usize) -> CFExpansion {
    match y.rational() {
        Some(r) => cf_rational(&r, max_terms),
        None => cf_laurent(y, max_terms),
    }
}

fn cf_rational(y: &RatFn, max_terms: usize) -> CFExpansion {
    let mut quotients = Vec::new();
    let mut cur = y.clone();
    let stop = loop {
        if quotients.len() >= max_terms {
            break CfStop::MaxTerms;
        }
        let (a, frac) = cur.split();
        quotients.push(a);
        if frac.is_zero() {
            break CfStop::Terminated;
        }
        cur = frac.inv().expect("nonzero fraction");
    };
    CFExpansion::from_quotients(quotients, stop)
}

fn cf_laurent(y: &Laurent, max_terms: usize) -> CFExpansion {
    let mut quotients = Vec::new();
    let mut cur = y.clone();
    let stop = loop {
        if quotients.len() >= max_terms {
            break CfStop::MaxTerms;
        }
        let Ok(a) = cur.polynomial_part() else {
            break CfStop::PrecisionExhausted;
        };
        quotients.push(a);
        let frac = cur.fractional_part();
        match frac.degree() {
            Ok(Degree::NegInf) => break CfStop::Terminated,
            Err(_) => break CfStop::PrecisionExhausted,
            Ok(_) => {}
        }
        match frac.inv() {
            Ok(x) => cur = x,
            Err(_) => break CfStop::PrecisionExhausted,
        }
    };
    CFExpansion::from_quotients(quotients, stop)
}

/// Check the convergent identities against `y`: coprimality, increasing
/// denominators, and `deg(q_k y - p_k) = -deg q_{k+1}` (`-inf` at termination).
pub fn check_cf_identities(y: &Laurent, cf: &CFExpansion) -> Result<(), String> {
    let conv = &cf.convergents;
    for (k, (p, q)) in conv.iter().enumerate() {
        if p.gcd(q).deg() != Degree::Finite(0) {
            return Err(format!("gcd(p_{k}, q_{k}) != 1"));
        }
        if k > 0 && cf.partial_quotients[k].deg() < Degree::Finite(1) {
            return Err(format!("deg a_{k} < 1"));
        }
        let err = y.mul_poly(q).sub(&Laurent::from_poly(p));
        let want = match conv.get(k + 1) {
            Some((_, qn)) => Degree::Finite(-qn.deg().finite().unwrap()),
            None if cf.terminated => Degree::NegInf,
            None => continue,
        };
        match err.degree() {
            Ok(d) if d == want => {}
            Ok(d) => return Err(format!("deg(q_{k} y - p_{k}) = {d}, expected {want}")),
            Err(_) => return Err(format!("deg(q_{k} y - p_{k}) unresolvable")),
        }
    }
    Ok(())
}
