use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{LaurentMat, LaurentVec};
use crate::diophantine::{best_profile, omega_estimate, BestProfile, Exponent, ExponentEstimate};
use crate::error::{Error, Result};
use crate::qpow::rat_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    WithinTolerance,
    /// Fails beyond the tolerance with both sides unflagged.
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: Option<Exponent>,
    pub rhs: Option<Exponent>,
    pub flagged: bool,
    pub status: CheckStatus,
}

fn recip(e: &Exponent) -> Exponent {
    match e {
        Exponent::Infinite => Exponent::Finite(BigRational::zero()),
        Exponent::Finite(r) if r.is_zero() => Exponent::Infinite,
        Exponent::Finite(r) => Exponent::Finite(r.recip()),
    }
}

/// `lhs >= rhs`, relaxed by `tol`.
fn compare(name: &str, lhs: Option<Exponent>, rhs: Option<Exponent>, flagged: bool, tol: &BigRational) -> InequalityCheck {
    let status = match (&lhs, &rhs) {
        (Some(l), Some(r)) if l >= r => CheckStatus::Holds,
        (Some(Exponent::Finite(l)), Some(Exponent::Finite(r))) if l + tol >= *r => CheckStatus::WithinTolerance,
        (Some(_), Some(_)) if !flagged => CheckStatus::Violated,
        _ => CheckStatus::Inconclusive,
    };
    InequalityCheck { name: name.into(), lhs, rhs, flagged, status }
}

fn estimate(p: &BestProfile, tau_min: u32) -> Option<ExponentEstimate> {
    omega_estimate(p, p.m, p.n, tau_min).ok()
}

/// The trivial inequality `omega >= omega_hat` on one estimate.
fn trivial(name: &str, e: &Option<ExponentEstimate>) -> InequalityCheck {
    match e {
        Some(e) => compare(
            name,
            Some(e.omega_lower.clone()),
            Some(e.omega_hat_window.clone()),
            e.precision_limited,
            &BigRational::zero(),
        ),
        None => compare(name, None, None, true, &BigRational::zero()),
    }
}

fn window_start(tau_max: u32) -> Result<u32> {
    if tau_max < 2 {
        return Err(Error::InvalidInput("tau_max must be at least 2".into()));
    }
    Ok((tau_max / 2).max(1))
}

#[derive(Debug, Clone, Serialize)]
pub struct BzReport {
    pub m: usize,
    pub n: usize,
    pub tau_max: u32,
    pub tau_min: u32,
    pub tolerance: String,
    /// Inhomogeneous estimate for `(X, theta)`.
    pub inhomogeneous: Option<ExponentEstimate>,
    /// Homogeneous estimate for the transpose.
    pub transpose: Option<ExponentEstimate>,
    pub checks: Vec<InequalityCheck>,
}

impl BzReport {
    pub fn violated(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Violated)
    }
}

/// `omega(X, theta) >= 1 / omega_hat(X^t)` and `omega_hat(X, theta) >= 1 / omega(X^t)`.
///
/// Left sides use the certified lower estimate and the window minimum of the
/// inhomogeneous profile; right sides use the transpose's window minimum and
/// certified lower estimate. The trivial inequality is checked on both.
pub fn check_bz(x: &LaurentMat, theta: &LaurentVec, tau_max: u32, tol: &BigRational) -> Result<BzReport> {
    let tau_min = window_start(tau_max)?;
    let xt = x.transpose();
    let inh = estimate(&best_profile(x, Some(theta), tau_max)?, tau_min);
    let tr = estimate(&best_profile(&xt, None, tau_max)?, tau_min);
    let flagged = inh.as_ref().is_none_or(|e| e.precision_limited) || tr.as_ref().is_none_or(|e| e.precision_limited);
    let checks = vec![
        compare(
            "omega(X,theta) >= 1/omega_hat(X^t)",
            inh.as_ref().map(|e| e.omega_lower.clone()),
            tr.as_ref().map(|e| recip(&e.omega_hat_window)),
            flagged,
            tol,
        ),
        compare(
            "omega_hat(X,theta) >= 1/omega(X^t)",
            inh.as_ref().map(|e| e.omega_hat_window.clone()),
            tr.as_ref().map(|e| recip(&e.omega_lower)),
            flagged,
            tol,
        ),
        trivial("omega(X,theta) >= omega_hat(X,theta)", &inh),
        trivial("omega(X^t) >= omega_hat(X^t)", &tr),
    ];
    Ok(BzReport {
        m: x.rows(),
        n: x.cols(),
        tau_max,
        tau_min,
        tolerance: rat_string(tol),
        inhomogeneous: inh,
        transpose: tr,
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DysonSide {
    pub m: usize,
    pub n: usize,
    pub estimate: Option<ExponentEstimate>,
    /// `m (-L(tau_max)) / (n tau_max)`, the reading at the largest scale.
    pub at_tau_max: Exponent,
    pub exact: bool,
    /// `1/tau_max` plus one step `m / (n tau_max)` of the ratio grid.
    pub tolerance: String,
    pub is_one: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DysonReport {
    pub tau_max: u32,
    pub tau_min: u32,
    /// `y` as a column: simultaneous approximation.
    pub column: DysonSide,
    /// `y` as a row: one linear form.
    pub row: DysonSide,
    pub status: CheckStatus,
    pub trivial: Vec<InequalityCheck>,
}

impl DysonReport {
    pub fn violated(&self) -> bool {
        self.status == CheckStatus::Violated || self.trivial.iter().any(|c| c.status == CheckStatus::Violated)
    }
}

fn dyson_side(y: &LaurentMat, tau_max: u32, tau_min: u32) -> Result<DysonSide> {
    let p = best_profile(y, None, tau_max)?;
    let (m, n) = (p.m, p.n);
    let tol = BigRational::new(BigInt::from(1), BigInt::from(tau_max))
        + BigRational::new(BigInt::from(m as u64), BigInt::from(n as u64 * tau_max as u64));
    let last = p.get(tau_max).expect("profile reaches tau_max");
    let at_tau_max = Exponent::ratio(m, n, tau_max, last.l);
    let is_one = match &at_tau_max {
        Exponent::Infinite => false,
        Exponent::Finite(r) => (r - BigRational::from_integer(1.into())).abs() <= tol,
    };
    Ok(DysonSide {
        m,
        n,
        estimate: estimate(&p, tau_min),
        at_tau_max,
        exact: last.exact,
        tolerance: rat_string(&tol),
        is_one,
    })
}

/// `omega(y) = 1` iff `omega(y^t) = 1`, each side read at its tolerance.
pub fn check_dyson(y: &LaurentVec, tau_max: u32) -> Result<DysonReport> {
    let tau_min = window_start(tau_max)?;
    let col = LaurentMat::column(y);
    let column = dyson_side(&col, tau_max, tau_min)?;
    let row = dyson_side(&col.transpose(), tau_max, tau_min)?;
    let status = if column.is_one == row.is_one {
        CheckStatus::Holds
    } else if column.exact && row.exact {
        CheckStatus::Violated
    } else {
        CheckStatus::Inconclusive
    };
    let trivial = vec![
        trivial("omega(y) >= omega_hat(y)", &column.estimate),
        trivial("omega(y^t) >= omega_hat(y^t)", &row.estimate),
    ];
    Ok(DysonReport { tau_max, tau_min, column, row, status, trivial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Laurent, RatFn, Poly};
    use crate::qpow::rat;

    /// Every partial quotient equal to T: y = [0; T, T, ...], a root of y^2 + T y - 1.
    fn all_t(f: &Field, floor: i64) -> Laurent {
        let mut y = Laurent::zero(f).with_floor(floor);
        let t = Laurent::from_poly(&Poly::t(f));
        for _ in 0..(-floor) {
            y = t.add(&y).inv_to(floor).unwrap();
        }
        y
    }

    #[test]
    fn rational_input_is_infinite() {
        let f = Field::prime(2).unwrap();
        let r = RatFn::new(Poly::one(&f), Poly::from_ints(&f, &[1, 1, 1])).unwrap();
        let y = Laurent::from_rational(&r, -60).unwrap();
        let x = LaurentMat::from_rows(vec![vec![y]]).unwrap();
        let theta = LaurentVec(vec![Laurent::t_pow(&f, -3)]);
        let rep = check_bz(&x, &theta, 10, &rat(0, 1)).unwrap();
        assert!(!rep.violated());
        assert_eq!(rep.transpose.unwrap().omega_lower, Exponent::Infinite);
    }

    #[test]
    fn quadratic_type_sides_are_one() {
        let f = Field::prime(2).unwrap();
        let y = all_t(&f, -90);
        let rep = check_dyson(&LaurentVec(vec![y.clone()]), 20).unwrap();
        assert_eq!(rep.status, CheckStatus::Holds);
        assert_eq!(rep.column.at_tau_max, Exponent::from_ratio(1, 1));
        let x = LaurentMat::from_rows(vec![vec![y]]).unwrap();
        let rep = check_bz(&x, &LaurentVec(vec![Laurent::zero(&f)]), 20, &rat(0, 1));
        assert!(!rep.unwrap().violated());
    }
}
