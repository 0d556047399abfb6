use rand::Rng;
use serde::Serialize;

use crate::algebra::{Fq, Laurent, Poly, RatFn};
use crate::error::Result;

use super::cells::BallSpec;
use super::polymap::PolyMap;

#[derive(Debug, Clone, Serialize)]
pub struct NonplanarReport {
    /// True only with a verified witness; false means none was found.
    pub found: bool,
    pub trials: u32,
    /// Points `x^(0), ..., x^(n)` (one literal per coordinate).
    pub witness: Option<Vec<Vec<Laurent>>>,
    pub determinant: Option<String>,
}

/// Determinant over F_q(T) by Gaussian elimination.
pub fn rat_det(mut a: Vec<Vec<RatFn>>) -> Result<RatFn> {
    let n = a.len();
    let f = a[0][0].field().clone();
    let mut det = RatFn::from_poly(Poly::one(&f));
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(RatFn::zero(&f));
        };
        if p != k {
            a.swap(p, k);
            det = det.neg();
        }
        let piv = a[k][k].clone();
        det = det.mul(&piv);
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].div(&piv)?;
            for j in k..n {
                let v = a[i][j].sub(&factor.mul(&a[k][j]));
                a[i][j] = v;
            }
        }
    }
    Ok(det)
}

/// Exact random point of the ball: the fixed digits of the center, then
/// `depth` random digits below them.
fn random_point<R: Rng + ?Sized>(f: &PolyMap, ball: &BallSpec, depth: usize, rng: &mut R) -> Vec<Laurent> {
    let fixed = ball.fixed_digits();
    ball.center
        .iter()
        .map(|ck| {
            let digits: Vec<Fq> = (0..fixed + depth)
                .map(|i| {
                    if i < fixed {
                        f.field.elem(ck.get(i).copied().unwrap_or(0)).unwrap()
                    } else {
                        f.field.elem(rng.gen_range(0..f.field.q())).unwrap()
                    }
                })
                .collect();
            Laurent::from_dense(&f.field, 0, digits, None)
        })
        .collect()
}

/// Search for `n + 1` points of `ball` at which the rows `(1, f_1, ..., f_n)`
/// are linearly independent over F.
pub fn nonplanarity_check<R: Rng + ?Sized>(f: &PolyMap, ball: &BallSpec, trials: u32, rng: &mut R) -> Result<NonplanarReport> {
    let n = f.n();
    let depth = 8;
    for _ in 0..trials {
        let pts: Vec<Vec<Laurent>> = (0..=n).map(|_| random_point(f, ball, depth, rng)).collect();
        let rows = pts
            .iter()
            .map(|x| {
                let xr: Vec<RatFn> = x.iter().map(|c| c.rational().expect("exact point")).collect();
                let mut row = vec![RatFn::from_poly(Poly::one(&f.field))];
                for g in &f.components {
                    row.push(g.eval_rational(&f.field, &xr).expect("exact coefficients"));
                }
                row
            })
            .collect();
        let det = rat_det(rows)?;
        if !det.is_zero() {
            return Ok(NonplanarReport { found: true, trials, witness: Some(pts), determinant: Some(det.to_string()) });
        }
    }
    Ok(NonplanarReport { found: false, trials, witness: None, determinant: None })
}
