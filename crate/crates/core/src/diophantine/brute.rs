use crate::algebra::{Degree, Laurent, LaurentMat, LaurentVec, Poly, RatFn};
use crate::error::{Error, Result};

use super::profile::{BestProfile, ProfileEntry, ProfileMode};

/// Largest number of `q` vectors the exhaustive profile will visit.
pub const BRUTE_FORCE_BUDGET: u128 = 10_000_000;

/// Keep the terms of degree `<= max_deg`.
fn truncate_poly(p: &Poly, max_deg: i64) -> Poly {
    if max_deg < 0 {
        return Poly::zero(p.field());
    }
    let c: Vec<_> = p.coeffs().iter().take(max_deg as usize + 1).copied().collect();
    Poly::from_coeffs(p.field(), c)
}

/// Error degree for one row given `Y_i . q - theta_i`, choosing the best `p`
/// of degree `<= deg_p_max`. Returns `(degree bound, resolvable)`.
fn row_error(value: Result<RatFn, Laurent>, deg_p_max: i64) -> Result<(Degree, bool)> {
    match value {
        Ok(r) => {
            let (poly, _) = r.split();
            let p = truncate_poly(&poly, deg_p_max);
            Ok((r.sub(&RatFn::from_poly(p)).deg(), true))
        }
        Err(l) => {
            let poly = l.polynomial_part()?;
            let p = truncate_poly(&poly, deg_p_max);
            let e = l.sub(&Laurent::from_poly(&p));
            Ok(match e.degree() {
                Ok(d) => (d, true),
                Err(_) => (e.degree_bound(), false),
            })
        }
    }
}

/// Exhaustive profile over every `q != 0` with `deg q_j < tau_max` and every
/// `p` with `deg p_i <= deg_p_max`.
pub fn brute_force_profile(
    y: &LaurentMat,
    theta: Option<&LaurentVec>,
    tau_max: u32,
    deg_p_max: i64,
) -> Result<BestProfile> {
    let (m, n) = (y.rows(), y.cols());
    let f = y.field();
    let qq = f.q() as u128;
    let per = qq.checked_pow(tau_max).ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: BRUTE_FORCE_BUDGET })?;
    let total = per.checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_BUDGET {
        return Err(Error::BudgetExceeded { needed: total, budget: BRUTE_FORCE_BUDGET });
    }
    let zero = Laurent::zero(f);
    let th = |i: usize| theta.map_or(&zero, |t| &t.0[i]);
    let rational: Option<(Vec<Vec<RatFn>>, Vec<RatFn>)> = (|| {
        let ym = (0..m).map(|i| (0..n).map(|j| y.get(i, j).rational()).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>()?;
        let tv = (0..m).map(|i| th(i).rational()).collect::<Option<Vec<_>>>()?;
        Some((ym, tv))
    })();

    let tmax = tau_max as usize;
    let mut best: Vec<(Degree, bool)> = vec![(Degree::Finite(i64::MAX), true); tmax + 1];
    for idx in 1..total as u64 {
        let mut rest = idx;
        let q: Vec<Poly> = (0..n)
            .map(|_| {
                let p = Poly::from_index(f, rest % per as u64);
                rest /= per as u64;
                p
            })
            .collect();
        let tau = q.iter().filter_map(|x| x.deg().finite()).max().unwrap() as usize + 1;
        let mut err = Degree::NegInf;
        let mut ambiguous = None;
        for i in 0..m {
            let value = match &rational {
                Some((ym, tv)) => Ok((0..n)
                    .fold(RatFn::zero(f), |acc, j| acc.add(&ym[i][j].mul(&RatFn::from_poly(q[j].clone()))))
                    .sub(&tv[i])),
                None => Err((0..n)
                    .fold(Laurent::zero(f), |acc, j| acc.add(&y.get(i, j).mul_poly(&q[j])))
                    .sub(th(i))),
            };
            let (d, ok) = row_error(value, deg_p_max)?;
            if ok {
                err = err.max(d);
            } else {
                ambiguous = ambiguous.max(Some(d));
            }
        }
        // an ambiguous row only matters if it could reach the resolved maximum
        let resolved = ambiguous.is_none_or(|b| b < err);
        if !resolved {
            err = err.max(ambiguous.unwrap());
        }
        let slot = &mut best[tau];
        slot.0 = slot.0.min(err);
        slot.1 &= resolved;
    }
    let mut entries = Vec::with_capacity(tmax);
    let mut acc = (Degree::Finite(i64::MAX), true);
    for (tau, b) in best.iter().enumerate().skip(1) {
        acc = (acc.0.min(b.0), acc.1 && b.1);
        entries.push(ProfileEntry { tau: tau as u32, l: acc.0, exact: acc.1 });
    }
    let mode = match theta {
        Some(t) => ProfileMode::Inhomogeneous(t.clone()),
        None => ProfileMode::Homogeneous,
    };
    Ok(BestProfile { mode, m, n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn zero_matrix_is_exact_zero() {
        let f = Field::prime(2).unwrap();
        let y = LaurentMat::zeros(&f, 1, 2);
        let prof = brute_force_profile(&y, None, 3, 4).unwrap();
        assert!(prof.entries.iter().all(|e| e.l.is_neg_inf() && e.exact));
    }

    #[test]
    fn budget_enforced() {
        let f = Field::prime(3).unwrap();
        let y = LaurentMat::zeros(&f, 1, 3);
        assert!(matches!(brute_force_profile(&y, None, 6, 0), Err(Error::BudgetExceeded { .. })));
    }
}
