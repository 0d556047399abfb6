use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::algebra::{Degree, Laurent};
use crate::error::{Error, Result};
use crate::qpow::{rat_string, QPow};

use super::cells::{eval_map_on_cells, BallSpec, CellDeg, CellGrid};
use super::polymap::PolyMap;

impl Serialize for QPow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One tested threshold: `eps` just above `e^{norm_deg - depth}`.
#[derive(Debug, Clone, Serialize)]
pub struct GoodLevel {
    pub depth: i64,
    /// `nu{x in B : deg g(x) <= norm_deg - depth} / nu(B)`.
    pub measure: String,
    /// The measure times `(||g|| / eps)^alpha`.
    pub ratio: QPow,
}

/// Sublevel data for one function on one ball. `alpha = kappa * ln q`.
#[derive(Debug, Clone, Serialize)]
pub struct GoodReport {
    pub kappa: String,
    pub norm_deg: Degree,
    pub levels: Vec<GoodLevel>,
    /// Smallest `C` for which every tested threshold satisfies the inequality.
    pub c_min: QPow,
    pub ambiguous_cells: u64,
    pub total_cells: u64,
    /// More than 1% of the cells are unresolved, or the norm itself is.
    pub inconclusive: bool,
}

impl GoodReport {
    /// Depths at which the inequality fails for constant `c`.
    pub fn violations(&self, c: &QPow) -> Vec<i64> {
        self.levels.iter().filter(|l| l.ratio > *c).map(|l| l.depth).collect()
    }
}

/// Good-constant analysis from a per-cell degree table.
///
/// For `eps` in `(e^{G-s}, e^{G-s+1}]` the strict sublevel set is
/// `{deg g <= G - s}`, so the supremum of the ratio over that range is its
/// value as `eps` decreases to `e^{G-s}`. Depths run from 1 (`eps` below the
/// norm) to the last depth at which every cell is decided.
pub fn good_from_degrees(grid: &CellGrid, degs: &[CellDeg], ball: &BallSpec, kappa: &BigRational) -> GoodReport {
    let q = grid.field.q();
    let cells: Vec<CellDeg> = ball.cells(grid).cells.iter().map(|&c| degs[c as usize]).collect();
    let total = cells.len() as u64;
    let ambiguous = cells.iter().filter(|c| matches!(c, CellDeg::AtMost(_))).count() as u64;
    let top_exact = cells.iter().filter_map(|c| match c {
        CellDeg::Exact(d) => Some(*d),
        _ => None,
    });
    let top_exact = top_exact.max().unwrap_or(Degree::NegInf);
    let top_bound = cells.iter().filter_map(|c| match c {
        CellDeg::AtMost(b) => Some(*b),
        _ => None,
    });
    let top_bound = top_bound.max();
    let mut report = GoodReport {
        kappa: rat_string(kappa),
        norm_deg: top_exact,
        levels: Vec::new(),
        c_min: QPow::zero(q),
        ambiguous_cells: ambiguous,
        total_cells: total,
        inconclusive: ambiguous * 100 > total,
    };
    let g = match top_exact {
        Degree::Finite(g) if top_bound.is_none_or(|b| b < g) => g,
        // identically zero on the ball: every sublevel is the whole ball and
        // the right-hand side is infinite
        Degree::NegInf if top_bound.is_none() => return report,
        _ => {
            report.inconclusive = true;
            return report;
        }
    };
    let cap = 64 * grid.res as i64 + 64;
    for s in 1..=cap {
        let mut inside = 0u64;
        let mut undecided = false;
        for c in &cells {
            match c.le(g - s) {
                Some(true) => inside += 1,
                Some(false) => {}
                None => undecided = true,
            }
        }
        if undecided {
            break;
        }
        let frac = BigRational::new(BigInt::from(inside), BigInt::from(total));
        let ratio = QPow::new(q, frac.clone(), kappa * BigInt::from(s));
        if ratio > report.c_min {
            report.c_min = ratio.clone();
        }
        report.levels.push(GoodLevel { depth: s, measure: rat_string(&frac), ratio });
        if inside == 0 {
            break;
        }
    }
    report
}

/// Good constants of `c_0 + sum c_i f_i` on `ball`, with cells of radius `e^{-res}`.
pub fn good_constants(f: &PolyMap, combo: &[Laurent], ball: &BallSpec, res: u32, kappa: &BigRational) -> Result<GoodReport> {
    if kappa <= &BigRational::zero() {
        return Err(Error::InvalidInput("alpha must be positive".into()));
    }
    let cells = eval_map_on_cells(f, res)?;
    let degs: Vec<CellDeg> = cells.combination(combo).iter().map(CellDeg::of).collect();
    Ok(good_from_degrees(&cells.grid, &degs, ball, kappa))
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaItem {
    pub item: u32,
    pub statement: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub items: Vec<LemmaItem>,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|i| i.holds)
    }
}

/// Instances for the closure properties of good functions.
pub struct LemmaInput<'a> {
    pub map: &'a PolyMap,
    pub combo_a: &'a [Laurent],
    pub combo_b: &'a [Laurent],
    pub scale: &'a Laurent,
    pub ball: &'a BallSpec,
    pub res: u32,
    pub kappa: BigRational,
    /// Weaker pair `(C2, kappa2)` with `C2 >= C_a`, `kappa2 <= kappa`.
    pub relaxed: (QPow, BigRational),
}

/// Re-check the closure properties from measured data: absolute value,
/// scaling by a constant, finite suprema, and relaxing `(C, alpha)`.
pub fn lemma_closure_check(input: &LemmaInput) -> Result<LemmaReport> {
    let cells = eval_map_on_cells(input.map, input.res)?;
    let grid = &cells.grid;
    let va = cells.combination(input.combo_a);
    let vb = cells.combination(input.combo_b);
    let da: Vec<CellDeg> = va.iter().map(CellDeg::of).collect();
    let db: Vec<CellDeg> = vb.iter().map(CellDeg::of).collect();
    let ra = good_from_degrees(grid, &da, input.ball, &input.kappa);
    let rb = good_from_degrees(grid, &db, input.ball, &input.kappa);
    let mut items = Vec::new();

    // |g| has the same sublevel sets as g; recompute from the absolute values
    let abs: Vec<CellDeg> = va.iter().map(|v| CellDeg::of(&v.neg())).collect();
    let r_abs = good_from_degrees(grid, &abs, input.ball, &input.kappa);
    items.push(LemmaItem {
        item: 1,
        statement: "g good iff |g| good".into(),
        holds: r_abs.c_min == ra.c_min,
        detail: format!("C(g) = {}, C(|g|) = {}", ra.c_min, r_abs.c_min),
    });

    let scaled: Vec<CellDeg> = va.iter().map(|v| CellDeg::of(&v.mul(input.scale))).collect();
    let r_scaled = good_from_degrees(grid, &scaled, input.ball, &input.kappa);
    let shift = input.scale.degree()?.finite().unwrap_or(0);
    let same_levels = r_scaled.levels.iter().map(|l| &l.measure).eq(ra.levels.iter().map(|l| &l.measure));
    items.push(LemmaItem {
        item: 2,
        statement: "g good implies c g good with the same constants".into(),
        holds: r_scaled.c_min == ra.c_min && same_levels && r_scaled.norm_deg == ra.norm_deg + shift,
        detail: format!("norm degree {} -> {}, C = {}", ra.norm_deg, r_scaled.norm_deg, r_scaled.c_min),
    });

    let sup: Vec<CellDeg> = da.iter().zip(&db).map(|(a, b)| a.max(*b)).collect();
    let r_sup = good_from_degrees(grid, &sup, input.ball, &input.kappa);
    let bound = ra.c_min.clone().max(rb.c_min.clone());
    items.push(LemmaItem {
        item: 3,
        statement: "sup of good functions is good".into(),
        holds: r_sup.c_min <= bound,
        detail: format!("C(sup) = {} <= max(C_a, C_b) = {}", r_sup.c_min, bound),
    });

    let (c2, k2) = &input.relaxed;
    let r_relaxed = good_from_degrees(grid, &da, input.ball, k2);
    let premise = *c2 >= ra.c_min && *k2 <= input.kappa;
    items.push(LemmaItem {
        item: 5,
        statement: "(C1, a1) good implies (C2, a2) good for C2 >= C1, a2 <= a1".into(),
        holds: premise && r_relaxed.violations(c2).is_empty(),
        detail: format!("C at relaxed exponent = {} <= {}", r_relaxed.c_min, c2),
    });
    Ok(LemmaReport { items })
}
