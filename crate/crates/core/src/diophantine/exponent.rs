use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::algebra::Degree;
use crate::error::{Error, Result};
use crate::qpow::rat_string;

use super::profile::BestProfile;

/// Exponent value; `Infinite` comes from an exact zero error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Finite(BigRational),
    Infinite,
}

impl Exponent {
    /// `m (-L) / (n tau)`.
    pub fn ratio(m: usize, n: usize, tau: u32, l: Degree) -> Exponent {
        match l {
            Degree::NegInf => Exponent::Infinite,
            Degree::Finite(d) => Exponent::Finite(BigRational::new(
                BigInt::from(-(m as i64) * d),
                BigInt::from(n as i64 * tau as i64),
            )),
        }
    }

    pub fn from_ratio(a: i64, b: i64) -> Exponent {
        Exponent::Finite(BigRational::new(a.into(), b.into()))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, o: &Exponent) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Exponent {
    fn cmp(&self, o: &Exponent) -> Ordering {
        match (self, o) {
            (Exponent::Infinite, Exponent::Infinite) => Ordering::Equal,
            (Exponent::Infinite, _) => Ordering::Greater,
            (_, Exponent::Infinite) => Ordering::Less,
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => f.write_str(&rat_string(r)),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentEstimate {
    /// Largest ratio certified by an exact profile entry.
    pub omega_lower: Exponent,
    /// Smallest ratio over `tau >= tau_min`. Flagged entries enter through
    /// their bound, which can only lower the minimum.
    pub omega_hat_window: Exponent,
    pub tau_range: (u32, u32),
    pub precision_limited: bool,
}

pub fn omega_estimate(profile: &BestProfile, m: usize, n: usize, tau_min: u32) -> Result<ExponentEstimate> {
    let tau_max = profile.tau_max();
    if tau_min == 0 || tau_min >= tau_max {
        return Err(Error::InvalidInput(format!("need 1 <= tau_min < tau_max, got {tau_min} and {tau_max}")));
    }
    let omega_lower = profile
        .entries
        .iter()
        .filter(|e| e.exact)
        .map(|e| Exponent::ratio(m, n, e.tau, e.l))
        .max()
        .ok_or(Error::AllFlagged)?;
    let omega_hat_window = profile
        .entries
        .iter()
        .filter(|e| e.tau >= tau_min)
        .map(|e| Exponent::ratio(m, n, e.tau, e.l))
        .min()
        .expect("window nonempty");
    Ok(ExponentEstimate {
        omega_lower,
        omega_hat_window,
        tau_range: (tau_min, tau_max),
        precision_limited: profile.entries.iter().any(|e| !e.exact),
    })
}
