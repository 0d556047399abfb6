use serde::Serialize;

use crate::algebra::{Degree, Laurent, LaurentMat, LaurentVec, Poly};
use crate::error::{Error, Result};
use crate::polylattice::{babai_residual, reduce_rows, row_degree};

use super::dirichlet::dirichlet_lattice;

/// Extra digits demanded beyond `(n + 1) * tau_max`.
pub const DEFAULT_GUARD: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    Homogeneous,
    Inhomogeneous(LaurentVec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub tau: u32,
    #[serde(rename = "L")]
    pub l: Degree,
    /// False when `l` is only an upper bound limited by precision.
    pub exact: bool,
}

/// `tau -> L(tau)`: least error degree over `q != 0`, `deg q_j < tau`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BestProfile {
    pub mode: ProfileMode,
    pub m: usize,
    pub n: usize,
    pub entries: Vec<ProfileEntry>,
}

impl BestProfile {
    pub fn get(&self, tau: u32) -> Option<&ProfileEntry> {
        self.entries.get((tau as usize).checked_sub(1)?)
    }

    pub fn tau_max(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,L,exact_flag\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.tau, e.l, e.exact));
        }
        out
    }
}

/// Common denominator degree when every entry has a known rational value.
fn rational_denominator_degree(entries: &[&Laurent]) -> Option<i64> {
    let f = entries.first()?.field().clone();
    let mut den = Poly::one(&f);
    for e in entries {
        let r = e.rational()?;
        let g = den.gcd(r.den());
        den = &den * &r.den().divmod(&g).ok()?.0;
    }
    den.deg().finite()
}

struct Search {
    rows: Vec<Vec<Poly>>,
    target: Option<Vec<Poly>>,
    m: usize,
    n: usize,
    precision: i64,
}

impl Search {
    fn eff(&self, c: i64) -> Vec<i64> {
        let mut e = vec![-self.precision; self.m];
        e.extend(std::iter::repeat_n(c, self.n));
        e
    }

    /// Is there `q != 0` with `deg q_j <= tau - 1` and error degree `<= d`?
    fn feasible(&mut self, tau: i64, d: i64) -> Result<bool> {
        let f = self.rows[0][0].field().clone();
        let eff = self.eff(d - tau + 1);
        let info = reduce_rows(&f, &mut self.rows, &eff, None)?;
        let m = self.m;
        let short_row_with_q = info
            .iter()
            .zip(&self.rows)
            .any(|(&(di, _), r)| di <= d && r[m..].iter().any(|x| !x.is_zero()));
        let Some(target) = &self.target else {
            return Ok(short_row_with_q);
        };
        let (res, _) = babai_residual(&f, &self.rows, &info, &eff, target)?;
        let dist = row_degree(&res, &eff).map_or(i64::MIN, |x| x.0);
        if dist > d {
            return Ok(false);
        }
        Ok(res[m..].iter().any(|x| !x.is_zero()) || short_row_with_q)
    }
}

/// Best-approximation profile for `tau = 1..=tau_max`, computed by lattice
/// reduction. With `theta` the error is `Y q - p - theta`.
pub fn best_profile(y: &LaurentMat, theta: Option<&LaurentVec>, tau_max: u32) -> Result<BestProfile> {
    let (m, n) = (y.rows(), y.cols());
    if let Some(t) = theta {
        if t.len() != m {
            return Err(Error::InvalidInput(format!("theta has {} entries, expected {m}", t.len())));
        }
    }
    let mut all: Vec<&Laurent> = y.entries().iter().collect();
    if let Some(t) = theta {
        all.extend(t.0.iter());
    }
    let tmax = tau_max as i64;
    // A nonzero error (A q - p Q - B)/Q has degree >= -deg Q, so for rational
    // input anything below that is an exact zero.
    let (y_eff, theta_eff, precision, rational_bound) = match rational_denominator_degree(&all) {
        Some(delta) => {
            let precision = delta + tmax + 1;
            let expand = |x: &Laurent| -> Result<Laurent> {
                let r = x.rational().expect("checked rational");
                if r.is_zero() {
                    return Ok(Laurent::zero(x.field()));
                }
                Laurent::from_rational(&r, -precision)
            };
            let rows = (0..m)
                .map(|i| (0..n).map(|j| expand(y.get(i, j))).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let th = theta
                .map(|t| t.0.iter().map(expand).collect::<Result<Vec<_>>>().map(LaurentVec))
                .transpose()?;
            (LaurentMat::from_rows(rows)?, th, precision, Some(-delta - 1))
        }
        None => {
            let floor = all.iter().filter_map(|x| x.floor()).max().expect("inexact entry present");
            let need = -((n as i64 + 1) * tmax + DEFAULT_GUARD);
            if floor > need {
                return Err(Error::PrecisionExhausted(format!("entries known to T^{floor}, need T^{need}")));
            }
            (y.clone(), theta.cloned(), -floor, None)
        }
    };
    let lat = dirichlet_lattice(&y_eff, precision)?;
    let target = theta_eff
        .map(|t| {
            let mut w = t.0.iter().map(|x| x.scaled_integer_part(precision)).collect::<Result<Vec<_>>>()?;
            w.extend(std::iter::repeat_n(Poly::zero(y.field()), n));
            Ok::<_, Error>(w)
        })
        .transpose()?;
    let mut search = Search { rows: lat.rows().to_vec(), target, m, n, precision };

    let mut entries = Vec::with_capacity(tau_max as usize);
    let mut cur = Degree::Finite(0);
    let mut exact = true;
    for tau in 1..=tmax {
        if let Degree::Finite(start) = cur {
            // unknown digits of Y shift the error by at most T^{-precision - 1 + tau - 1}
            let lo = rational_bound.unwrap_or(-precision + tau - 2);
            let mut d = start;
            loop {
                if d - 1 < lo {
                    match rational_bound {
                        Some(_) => cur = Degree::NegInf,
                        None => {
                            cur = Degree::Finite(d);
                            exact = false;
                        }
                    }
                    break;
                }
                if search.feasible(tau, d - 1)? {
                    d -= 1;
                } else {
                    cur = Degree::Finite(d);
                    exact = true;
                    break;
                }
            }
        }
        entries.push(ProfileEntry { tau: tau as u32, l: cur, exact });
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
    use crate::algebra::{parse_rational, Field};

    #[test]
    fn rational_becomes_exact_zero() {
        let f = Field::prime(2).unwrap();
        let r = parse_rational("(T + 1)/(T^3 + T + 1)", &f).unwrap();
        let y = LaurentMat::from_rows(vec![vec![Laurent::from_rational(&r, -10).unwrap()]]).unwrap();
        let prof = best_profile(&y, None, 6).unwrap();
        for e in &prof.entries {
            assert!(e.exact);
            assert_eq!(e.l.is_neg_inf(), e.tau > 3, "{e:?}");
        }
    }

    #[test]
    fn all_quotients_t() {
        let f = Field::prime(2).unwrap();
        let mut y = Laurent::zero(&f);
        for _ in 0..60 {
            y = Laurent::from_poly(&Poly::t(&f)).add(&y).inv().unwrap().with_floor(-80);
        }
        let ym = LaurentMat::from_rows(vec![vec![y]]).unwrap();
        let prof = best_profile(&ym, None, 20).unwrap();
        for e in &prof.entries {
            assert_eq!(e.l, Degree::Finite(-(e.tau as i64)));
            assert!(e.exact);
        }
    }
}
