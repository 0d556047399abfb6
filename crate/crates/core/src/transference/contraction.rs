use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::goodmaps::{good_from_degrees, BallSpec, CellDeg, CylinderSet};
use crate::qpow::{rat_string, QPow};

use super::intersection::Violation;
use super::sets::{AlphaIndex, SetFamily};

#[derive(Debug, Clone, Serialize)]
pub struct BallCheck {
    pub ball: BallSpec,
    pub dilated: BallSpec,
    /// `lambda(5B cap I_t(alpha, psi_omega))`, ambiguous cells included.
    pub lhs_measure: String,
    /// `mu(5B) = lambda(5B cap V)`.
    pub mu_dilated: String,
    /// `rhs / lhs` for the `q^d` constant; at least 1 when the inequality holds.
    pub margin: Option<QPow>,
    pub holds: bool,
    /// The same inequality with the constant `5^n`.
    pub holds_5n: bool,
    /// Least good constant of `F_alpha` on `5B`.
    pub good_c: QPow,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaContraction {
    pub alpha: AlphaIndex,
    pub i_measure: String,
    pub i_plus_measure: String,
    pub subset_ok: bool,
    pub balls: Vec<BallCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub t: u32,
    pub omega: String,
    pub omega_plus: String,
    pub threshold_deg: i64,
    pub threshold_plus_deg: i64,
    pub good_c: QPow,
    pub kappa: String,
    /// `q^d C q^{-kappa (omega - 1) n t / 2}`.
    pub k_t: QPow,
    pub k_t_5n: QPow,
    /// Ratio of consecutive `k_t`; below 1 makes `sum_t k_t` finite.
    pub summability_ratio: QPow,
    pub summable: bool,
    /// Every alpha has `I_t(alpha, psi_+) != V`.
    pub subset_ok: bool,
    pub measured_c: QPow,
    pub alphas: Vec<AlphaContraction>,
    pub violations: Vec<Violation>,
    pub ambiguous_cells: u64,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.summable
    }
}

fn count_in(set: &CylinderSet, ball: &BallSpec) -> u64 {
    set.cells.iter().filter(|&&c| ball.contains_cell(&set.grid, c)).count() as u64
}

/// Build the ball collections and check the three contraction conditions
/// with `psi* = psi_omega`, `psi+ = psi_{(omega+1)/2}`.
pub fn verify_contraction(fam: &SetFamily) -> Result<ContractionReport> {
    let cfg = &fam.cfg;
    let grid = &fam.cells.grid;
    let q = grid.field.q();
    let (d, n) = (grid.d, fam.n());
    let w = cfg.omega.clone();
    let wp = fam.omega_plus();
    let (j, jp) = (fam.threshold(&w), fam.threshold(&wp));
    let half_gap = (&w - BigRational::one()) / BigInt::from(2);
    let decay = &cfg.kappa * &half_gap * BigInt::from(n as u64 * cfg.t as u64);
    let dil = BigRational::from_integer(BigInt::from(q).pow(d as u32));
    let dil5 = BigRational::from_integer(BigInt::from(5).pow(n as u32));
    let k_t = QPow::rational(q, dil.clone()).mul(&cfg.good_c).mul(&QPow::q_pow(q, -decay.clone()));
    let k_t_5n = QPow::rational(q, dil5.clone()).mul(&cfg.good_c).mul(&QPow::q_pow(q, -decay.clone()));
    let summability_ratio = QPow::q_pow(q, -(&cfg.kappa * &half_gap * BigInt::from(n as u64)));
    let summable = summability_ratio < QPow::rational(q, BigRational::one());
    let five = BigRational::from_integer(BigInt::from(5));
    let five_v = cfg.v.dilate(&five)?;
    let five_v_cells = five_v.cells(grid);

    let mut report = ContractionReport {
        t: cfg.t,
        omega: rat_string(&w),
        omega_plus: rat_string(&wp),
        threshold_deg: j,
        threshold_plus_deg: jp,
        good_c: cfg.good_c.clone(),
        kappa: rat_string(&cfg.kappa),
        k_t,
        k_t_5n,
        summability_ratio,
        summable,
        subset_ok: true,
        measured_c: QPow::zero(q),
        alphas: Vec::new(),
        violations: Vec::new(),
        ambiguous_cells: 0,
    };
    let cell_m = grid.cell_measure();
    for alpha in fam.enum_alphas()? {
        let i_set = fam.build_i_set(&alpha, &w);
        if i_set.certain.is_empty() && i_set.ambiguous.is_empty() {
            continue;
        }
        let i_plus = fam.build_i_set(&alpha, &wp);
        report.ambiguous_cells += (i_set.ambiguous.len() + i_plus.ambiguous.len()) as u64;
        let subset_ok = i_plus.certain.len() < fam.v_cells.len();
        report.subset_ok &= subset_ok;
        let idx = vec![alpha.to_string()];

        // largest ball around each cell of I_omega inside I_+, capped at V
        let mut balls = BTreeSet::new();
        for &x in &i_set.certain.cells {
            let mut best = None;
            for r in -(cfg.res as i64)..=cfg.v.radius_exp {
                let b = BallSpec::around(grid, x, r);
                let size = (q as u64).pow(d as u32 * (cfg.res - b.fixed_digits() as u32));
                if count_in(&i_plus.certain, &b) == size {
                    best = Some(b);
                } else {
                    break;
                }
            }
            balls.insert(best.expect("the cell of x lies in I_+"));
        }
        let covered: BTreeSet<u64> = i_set
            .certain
            .cells
            .iter()
            .copied()
            .filter(|&c| balls.iter().any(|b| b.contains_cell(grid, c)))
            .collect();
        if let Some(&c) = i_set.certain.cells.iter().find(|c| !covered.contains(c)) {
            report.violations.push(Violation {
                check: "inter1".into(),
                indices: idx.clone(),
                cell: grid.word(c),
                detail: "cell of I_omega outside every ball".into(),
            });
        }

        // F_alpha degrees on 5V for the measured good constant
        let mut degs = vec![CellDeg::Exact(crate::algebra::Degree::NegInf); grid.count() as usize];
        for &c in &five_v_cells.cells {
            degs[c as usize] = CellDeg::of(&fam.value(c, &alpha.p, &alpha.q, true));
        }
        let i_all = i_set.certain.union(&i_set.ambiguous);
        let mut checks = Vec::new();
        for b in &balls {
            let bc = b.cells(grid);
            if let Some(&c) = bc.cells.iter().find(|c| !i_plus.certain.contains(**c)) {
                report.violations.push(Violation {
                    check: "inter2".into(),
                    indices: idx.clone(),
                    cell: grid.word(c),
                    detail: "ball leaves I_+".into(),
                });
            }
            let fb = b.dilate(&five)?;
            let fb_cells = fb.cells(grid);
            let lhs_set = fb_cells.intersection(&i_all);
            let lhs = cell_m.clone() * BigInt::from(lhs_set.len());
            let mu = cell_m.clone() * BigInt::from(fb_cells.intersection(&fam.v_cells).len());
            let lhs_q = QPow::new(q, lhs.clone(), decay.clone());
            let rhs = QPow::rational(q, &dil * &mu).mul(&cfg.good_c);
            let rhs5 = QPow::rational(q, &dil5 * &mu).mul(&cfg.good_c);
            let holds = lhs_q <= rhs;
            let margin = (!lhs.is_zero()).then(|| rhs.div(&lhs_q));
            if !holds {
                report.violations.push(Violation {
                    check: "inter3".into(),
                    indices: idx.clone(),
                    cell: grid.word(*lhs_set.cells.iter().next().unwrap()),
                    detail: format!("{} > {}", lhs_q, rhs),
                });
            }
            let good = good_from_degrees(grid, &degs, &fb, &cfg.kappa);
            if good.c_min > report.measured_c {
                report.measured_c = good.c_min.clone();
            }
            checks.push(BallCheck {
                ball: b.clone(),
                dilated: fb,
                lhs_measure: rat_string(&lhs),
                mu_dilated: rat_string(&mu),
                margin,
                holds,
                holds_5n: lhs_q <= rhs5,
                good_c: good.c_min,
            });
        }
        report.alphas.push(AlphaContraction {
            alpha,
            i_measure: rat_string(&i_set.certain.measure()),
            i_plus_measure: rat_string(&i_plus.certain.measure()),
            subset_ok,
            balls: checks,
        });
    }
    Ok(report)
}
