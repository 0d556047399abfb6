use serde::Serialize;

use crate::algebra::{Degree, Laurent, LaurentMat, Poly};
use crate::error::{Error, Result};
use crate::polylattice::{shortest_vector, weak_popov, PolyMat, Shift};

/// Linear forms `Y` (m x n) with integer weights `t` of length m + n.
#[derive(Debug, Clone)]
pub struct DirichletInstance {
    pub y: LaurentMat,
    pub t: Vec<i64>,
}

impl DirichletInstance {
    pub fn new(y: LaurentMat, t: Vec<i64>) -> Result<DirichletInstance> {
        let (m, n) = (y.rows(), y.cols());
        if t.len() != m + n {
            return Err(Error::InvalidWeights(format!("expected {} weights, got {}", m + n, t.len())));
        }
        if t.iter().any(|&x| x < 0) {
            return Err(Error::InvalidWeights("weights must be nonnegative".into()));
        }
        let (a, b): (i64, i64) = (t[..m].iter().sum(), t[m..].iter().sum());
        if a != b {
            return Err(Error::InvalidWeights(format!("unbalanced weights: {a} != {b}")));
        }
        let inst = DirichletInstance { y, t };
        if let Some(f) = inst.y.floor() {
            if f > -inst.required_precision() {
                return Err(Error::PrecisionExhausted(format!(
                    "entries known to T^{f}, need T^{}",
                    -inst.required_precision()
                )));
            }
        }
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.y.rows()
    }

    pub fn n(&self) -> usize {
        self.y.cols()
    }

    /// Number of fractional digits every entry must carry.
    pub fn required_precision(&self) -> i64 {
        let m = self.m();
        self.t[..m].iter().copied().max().unwrap_or(0) + self.t[m..].iter().sum::<i64>() + 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxSolution {
    pub p: Vec<Poly>,
    pub q: Vec<Poly>,
    pub err_deg: Vec<Degree>,
    pub q_deg: Degree,
}

/// Lattice spanned by `T^P e_i` (error block) and `(Y_{.j}, e_j)` (q block),
/// error columns stored multiplied by `T^P`.
pub fn dirichlet_lattice(y: &LaurentMat, precision: i64) -> Result<PolyMat> {
    let (m, n) = (y.rows(), y.cols());
    let f = y.field();
    let mut rows = Vec::with_capacity(m + n);
    for i in 0..m {
        let mut r = vec![Poly::zero(f); m + n];
        r[i] = Poly::t(f).pow(precision as u32);
        rows.push(r);
    }
    for j in 0..n {
        let mut r = vec![Poly::zero(f); m + n];
        for (i, slot) in r.iter_mut().enumerate().take(m) {
            *slot = y.get(i, j).scaled_integer_part(precision)?;
        }
        r[m + j] = Poly::one(f);
        rows.push(r);
    }
    let mut scale = vec![-precision; m];
    scale.extend(std::iter::repeat_n(0, n));
    PolyMat::with_scale(f, rows, scale)
}

/// `Y_i . q` as a Laurent series.
pub(crate) fn linear_form(y: &LaurentMat, i: usize, q: &[Poly]) -> Laurent {
    (0..y.cols()).fold(Laurent::zero(y.field()), |acc, j| acc.add(&y.get(i, j).mul_poly(&q[j])))
}

/// Solve the weighted Dirichlet system via a shortest vector.
pub fn dirichlet_solve(inst: &DirichletInstance) -> Result<ApproxSolution> {
    let m = inst.m();
    let precision = inst.required_precision();
    let lat = dirichlet_lattice(&inst.y, precision)?;
    let mut s: Vec<i64> = inst.t[..m].iter().map(|t| t + 1).collect();
    s.extend(inst.t[m..].iter().map(|t| -t));
    let red = weak_popov(&lat, &Shift(s))?;
    let (v, d) = shortest_vector(&red);
    debug_assert!(d <= 0);
    let q: Vec<Poly> = v[m..].to_vec();
    let p = (0..m)
        .map(|i| linear_form(&inst.y, i, &q).polynomial_part())
        .collect::<Result<Vec<_>>>()?;
    let check = validate_solution(inst, &p, &q);
    Ok(ApproxSolution { p, q, err_deg: check.err_deg, q_deg: check.q_deg })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCheck {
    pub ok: bool,
    /// Degree of `Y_i q - p_i`, or its best upper bound when below precision.
    pub err_deg: Vec<Degree>,
    pub q_deg: Degree,
}

/// Re-evaluate the Dirichlet inequalities for `(p, q)` from scratch.
pub fn validate_solution(inst: &DirichletInstance, p: &[Poly], q: &[Poly]) -> SolutionCheck {
    let m = inst.m();
    let q_deg = q.iter().map(|x| x.deg()).max().unwrap_or(Degree::NegInf);
    let mut ok = !q_deg.is_neg_inf();
    for (j, qj) in q.iter().enumerate() {
        ok &= qj.deg() <= Degree::Finite(inst.t[m + j]);
    }
    let err_deg: Vec<Degree> = (0..m)
        .map(|i| {
            let e = linear_form(&inst.y, i, q).sub(&Laurent::from_poly(&p[i]));
            e.degree_bound()
        })
        .collect();
    for (i, e) in err_deg.iter().enumerate() {
        ok &= *e <= Degree::Finite(-inst.t[i] - 1);
    }
    SolutionCheck { ok, err_deg, q_deg }
}
