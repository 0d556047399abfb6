use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::algebra::{Laurent, Poly};
use crate::error::{Error, Result};
use crate::goodmaps::{eval_map_on_cells, BallSpec, CellDeg, CylinderSet, MapCells, PolyMap};
use crate::qpow::QPow;

/// Largest number of indices `enum_alphas` will produce.
pub const ALPHA_BUDGET: u128 = 1_000_000;

/// `alpha = (p, q)` with `q != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaIndex {
    pub p: Poly,
    pub q: Vec<Poly>,
}

impl AlphaIndex {
    pub fn sub(&self, o: &AlphaIndex) -> (Poly, Vec<Poly>) {
        let p = poly_sub(&self.p, &o.p);
        let q = self.q.iter().zip(&o.q).map(|(a, b)| poly_sub(a, b)).collect();
        (p, q)
    }
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    let minus_one = a.field().neg(a.field().from_int(1));
    out.add_scaled_shifted(b, minus_one, 0);
    out
}

impl fmt::Display for AlphaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<String> = self.q.iter().map(|x| x.to_string()).collect();
        write!(f, "p={}; q=({})", self.p, q.join(", "))
    }
}

impl Serialize for AlphaIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One finite-horizon instance of the set families `I_t`, `H_t`.
#[derive(Debug, Clone)]
pub struct SetFamilyConfig {
    pub f: PolyMap,
    pub v: BallSpec,
    pub theta: Laurent,
    pub omega: BigRational,
    pub t: u32,
    pub res: u32,
    /// Good constants `(C, kappa)` of the combinations, `alpha_0 = kappa ln q`.
    pub good_c: QPow,
    pub kappa: BigRational,
}

/// `deg <= -(floor(n w t) + 1)`, which is `|.| < e^{-n w t}` on `e^Z`.
pub fn psi_threshold(n: usize, w: &BigRational, t: u32) -> i64 {
    let x = w * BigInt::from(n as u64 * t as u64);
    let fl: BigInt = x.numer().div_floor(x.denom());
    -(i64::try_from(fl).expect("threshold fits in i64") + 1)
}

/// Configuration plus the map evaluated on every cell.
#[derive(Debug, Clone)]
pub struct SetFamily {
    pub cfg: SetFamilyConfig,
    pub cells: MapCells,
    /// Cells of `V`.
    pub v_cells: CylinderSet,
}

/// Membership of a cylinder set, with unresolved cells kept apart.
#[derive(Debug, Clone)]
pub struct FlaggedSet {
    pub certain: CylinderSet,
    pub ambiguous: CylinderSet,
}

impl SetFamily {
    pub fn new(cfg: SetFamilyConfig) -> Result<SetFamily> {
        if cfg.omega <= BigRational::one() {
            return Err(Error::InvalidInput("omega must exceed 1".into()));
        }
        if !cfg.kappa.is_positive() {
            return Err(Error::InvalidInput("alpha_0 must be positive".into()));
        }
        if cfg.v.center.len() != cfg.f.d {
            return Err(Error::InvalidInput("ball dimension differs from the map domain".into()));
        }
        let five_v = cfg.v.dilate(&BigRational::from_integer(5.into()))?;
        if !five_v.is_inside(&BallSpec::unit(cfg.f.d)) {
            return Err(Error::InvalidInput("5V must lie in the unit ball".into()));
        }
        if cfg.v.fixed_digits() > cfg.res as usize {
            return Err(Error::InvalidInput("V is finer than the cell resolution".into()));
        }
        let cells = eval_map_on_cells(&cfg.f, cfg.res)?;
        let v_cells = cfg.v.cells(&cells.grid);
        Ok(SetFamily { cfg, cells, v_cells })
    }

    pub fn n(&self) -> usize {
        self.cfg.f.n()
    }

    /// Threshold of `psi_w(t)`.
    pub fn threshold(&self, w: &BigRational) -> i64 {
        psi_threshold(self.n(), w, self.cfg.t)
    }

    pub fn omega_plus(&self) -> BigRational {
        (&self.cfg.omega + BigRational::one()) / BigInt::from(2)
    }

    /// `f(x).q + p (+ theta)` on one cell.
    pub fn value(&self, cell: u64, p: &Poly, q: &[Poly], with_theta: bool) -> Laurent {
        let mut acc = Laurent::from_poly(p);
        if with_theta {
            acc = acc.add(&self.cfg.theta);
        }
        for (fj, qj) in self.cells.values[cell as usize].iter().zip(q) {
            if !qj.is_zero() {
                acc = acc.add(&fj.mul_poly(qj));
            }
        }
        acc
    }

    /// Cells of `ball` where `deg(value) <= threshold`, split by certainty.
    pub fn level_set(&self, ball_cells: &CylinderSet, p: &Poly, q: &[Poly], with_theta: bool, threshold: i64) -> FlaggedSet {
        let grid = &self.cells.grid;
        let mut out = FlaggedSet { certain: CylinderSet::empty(grid), ambiguous: CylinderSet::empty(grid) };
        for &c in &ball_cells.cells {
            match CellDeg::of(&self.value(c, p, q, with_theta)).le(threshold) {
                Some(true) => {
                    out.certain.cells.insert(c);
                }
                Some(false) => {}
                None => {
                    out.ambiguous.cells.insert(c);
                }
            }
        }
        out
    }

    /// Every alpha whose set `I_t(alpha, eps)` can be nonempty for `eps <= 1`:
    /// `q != 0` with `deg q_j <= t`, and `deg p <= sup_V deg(f.q + theta)`
    /// (otherwise `|F_alpha| = |p| >= 1`). Nonzero unit multiples are kept.
    pub fn enum_alphas(&self) -> Result<Vec<AlphaIndex>> {
        let field = &self.cfg.f.field;
        let qq = field.q() as u128;
        let per_coord = qq.checked_pow(self.cfg.t + 1).ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: ALPHA_BUDGET })?;
        let q_count = per_coord.checked_pow(self.n() as u32).unwrap_or(u128::MAX);
        if q_count > ALPHA_BUDGET {
            return Err(Error::BudgetExceeded { needed: q_count, budget: ALPHA_BUDGET });
        }
        let mut out = Vec::new();
        let zero = Poly::zero(field);
        for idx in 1..q_count as u64 {
            let mut rest = idx;
            let q: Vec<Poly> = (0..self.n())
                .map(|_| {
                    let digit = rest % per_coord as u64;
                    rest /= per_coord as u64;
                    Poly::from_index(field, digit)
                })
                .collect();
            let sup = self
                .v_cells
                .cells
                .iter()
                .map(|&c| CellDeg::of(&self.value(c, &zero, &q, true)).upper())
                .max()
                .and_then(|d| d.finite());
            let p_count: u128 = match sup {
                Some(s) if s >= 0 => qq.checked_pow(s as u32 + 1).unwrap_or(u128::MAX),
                _ => 1,
            };
            if out.len() as u128 + p_count > ALPHA_BUDGET {
                return Err(Error::BudgetExceeded { needed: out.len() as u128 + p_count, budget: ALPHA_BUDGET });
            }
            for pi in 0..p_count as u64 {
                out.push(AlphaIndex { p: Poly::from_index(field, pi), q: q.clone() });
            }
        }
        Ok(out)
    }

    /// `I_t(alpha, psi_w(t))` on `V`.
    pub fn build_i_set(&self, alpha: &AlphaIndex, w: &BigRational) -> FlaggedSet {
        self.level_set(&self.v_cells, &alpha.p, &alpha.q, true, self.threshold(w))
    }

    /// `H_t(alpha, psi_w(t))` on `V`: the same without `theta`.
    pub fn build_h_set(&self, p: &Poly, q: &[Poly], w: &BigRational) -> FlaggedSet {
        self.level_set(&self.v_cells, p, q, false, self.threshold(w))
    }
}
