use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::algebra::{Degree, Field, Fq, Laurent};
use crate::error::{Error, Result};

use super::polymap::{powers, MPoly, PolyMap};

/// Largest number of cells a grid may hold.
pub const CELL_BUDGET: u128 = 10_000_000;

/// Partition of the closed unit ball `{deg x <= 0}` of `F^d` into the balls of
/// radius `e^{-res}`. A cell fixes the digits at degrees `0, -1, ..., -(res-1)`
/// of every coordinate; digit `i` of coordinate `k` sits at base-q position
/// `k * res + i` of the cell index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGrid {
    pub field: Field,
    pub d: usize,
    pub res: u32,
}

impl CellGrid {
    pub fn new(field: &Field, d: usize, res: u32) -> Result<CellGrid> {
        if res == 0 || d == 0 {
            return Err(Error::InvalidInput("resolution and dimension must be positive".into()));
        }
        let needed = (field.q() as u128).checked_pow(res * d as u32).unwrap_or(u128::MAX);
        if needed > CELL_BUDGET {
            return Err(Error::BudgetExceeded { needed, budget: CELL_BUDGET });
        }
        Ok(CellGrid { field: field.clone(), d, res })
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn count(&self) -> u64 {
        self.q().pow(self.res * self.d as u32)
    }

    pub fn digit(&self, cell: u64, k: usize, i: u32) -> u32 {
        ((cell / self.q().pow(k as u32 * self.res + i)) % self.q()) as u32
    }

    pub fn digits(&self, cell: u64) -> Vec<Vec<u32>> {
        (0..self.d).map(|k| (0..self.res).map(|i| self.digit(cell, k, i)).collect()).collect()
    }

    pub fn from_digits(&self, digits: &[Vec<u32>]) -> u64 {
        let mut idx = 0;
        for (k, dk) in digits.iter().enumerate() {
            for (i, &c) in dk.iter().enumerate().take(self.res as usize) {
                idx += c as u64 * self.q().pow(k as u32 * self.res + i as u32);
            }
        }
        idx
    }

    /// Cell as a point whose digits below the resolution are unknown.
    pub fn point(&self, cell: u64) -> Vec<Laurent> {
        self.digits(cell)
            .into_iter()
            .map(|dk| Laurent::from_dense(&self.field, 0, dk.into_iter().map(Fq).collect(), Some(1 - self.res as i64)))
            .collect()
    }

    /// Digits of the cell, coordinate by coordinate from degree 0 down, in hex.
    pub fn word(&self, cell: u64) -> String {
        let width = if self.q() <= 16 { 1 } else { 2 };
        self.digits(cell)
            .iter()
            .flatten()
            .map(|c| format!("{c:0width$x}"))
            .collect()
    }

    pub fn cell_measure(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.q()).pow(self.res * self.d as u32))
    }
}

/// Union of grid cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSet {
    pub grid: CellGrid,
    pub cells: BTreeSet<u64>,
}

impl CylinderSet {
    pub fn empty(grid: &CellGrid) -> CylinderSet {
        CylinderSet { grid: grid.clone(), cells: BTreeSet::new() }
    }

    pub fn full(grid: &CellGrid) -> CylinderSet {
        CylinderSet { grid: grid.clone(), cells: (0..grid.count()).collect() }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: u64) -> bool {
        self.cells.contains(&cell)
    }

    /// Haar measure, normalized so the unit ball has measure 1.
    pub fn measure(&self) -> BigRational {
        self.grid.cell_measure() * BigInt::from(self.cells.len())
    }

    pub fn union(&self, o: &CylinderSet) -> CylinderSet {
        CylinderSet { grid: self.grid.clone(), cells: self.cells.union(&o.cells).copied().collect() }
    }

    pub fn intersection(&self, o: &CylinderSet) -> CylinderSet {
        CylinderSet { grid: self.grid.clone(), cells: self.cells.intersection(&o.cells).copied().collect() }
    }

    pub fn difference(&self, o: &CylinderSet) -> CylinderSet {
        CylinderSet { grid: self.grid.clone(), cells: self.cells.difference(&o.cells).copied().collect() }
    }

    pub fn is_subset(&self, o: &CylinderSet) -> bool {
        self.cells.is_subset(&o.cells)
    }

    /// Sorted hex words of the member cells.
    pub fn hex_words(&self) -> Vec<String> {
        let mut w: Vec<String> = self.cells.iter().map(|&c| self.grid.word(c)).collect();
        w.sort();
        w
    }
}

pub fn cylinder_measure(s: &CylinderSet) -> BigRational {
    s.measure()
}

/// Closed ball `{x : deg(x - c) <= radius_exp}`; for `radius_exp <= 0` it fixes
/// the top `-radius_exp` digits of every coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BallSpec {
    /// Digits of the center at degrees `0, -1, ...` per coordinate.
    pub center: Vec<Vec<u32>>,
    pub radius_exp: i64,
}

impl BallSpec {
    pub fn unit(d: usize) -> BallSpec {
        BallSpec { center: vec![Vec::new(); d], radius_exp: 0 }
    }

    /// Ball of radius `e^{radius_exp}` around a grid cell.
    pub fn around(grid: &CellGrid, cell: u64, radius_exp: i64) -> BallSpec {
        let fixed = (-radius_exp).clamp(0, grid.res as i64) as usize;
        let center = grid.digits(cell).into_iter().map(|mut dk| {
            dk.truncate(fixed);
            dk
        });
        BallSpec { center: center.collect(), radius_exp }
    }

    pub fn fixed_digits(&self) -> usize {
        (-self.radius_exp).max(0) as usize
    }

    /// Haar measure `q^{d * radius_exp}`.
    pub fn measure(&self, q: u32) -> BigRational {
        let e = self.radius_exp * self.center.len() as i64;
        let base = BigInt::from(q);
        if e >= 0 {
            BigRational::from_integer(base.pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), base.pow((-e) as u32))
        }
    }

    pub fn contains_cell(&self, grid: &CellGrid, cell: u64) -> bool {
        let fixed = self.fixed_digits().min(grid.res as usize);
        self.center.iter().enumerate().all(|(k, ck)| {
            (0..fixed).all(|i| ck.get(i).copied().unwrap_or(0) == grid.digit(cell, k, i as u32))
        })
    }

    pub fn cells(&self, grid: &CellGrid) -> CylinderSet {
        if self.fixed_digits() > grid.res as usize {
            // smaller than one cell: keep the cell holding the center
            let idx = grid.from_digits(&self.center);
            return CylinderSet { grid: grid.clone(), cells: [idx].into_iter().collect() };
        }
        CylinderSet { grid: grid.clone(), cells: (0..grid.count()).filter(|&c| self.contains_cell(grid, c)).collect() }
    }

    /// `{x : |x - c| <= c_factor * radius}` equals the ball with radius exponent
    /// `radius_exp + floor(ln c_factor)`, since distances lie in `e^Z`.
    pub fn dilate(&self, c_factor: &BigRational) -> Result<BallSpec> {
        let k = super::doubling::floor_ln(c_factor)?;
        let mut out = self.clone();
        out.radius_exp += k;
        let fixed = out.fixed_digits();
        for ck in out.center.iter_mut() {
            ck.truncate(fixed);
        }
        Ok(out)
    }

    /// Does this ball lie inside `o` (both closed, ultrametric)?
    pub fn is_inside(&self, o: &BallSpec) -> bool {
        if self.radius_exp > o.radius_exp {
            return false;
        }
        let fixed = o.fixed_digits();
        self.center.iter().zip(&o.center).all(|(a, b)| {
            (0..fixed).all(|i| a.get(i).copied().unwrap_or(0) == b.get(i).copied().unwrap_or(0))
        })
    }
}

/// Degree of a value on one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellDeg {
    /// Constant over the cell.
    Exact(Degree),
    /// Unresolved; every point of the cell has degree at most this.
    AtMost(i64),
}

impl CellDeg {
    pub fn of(v: &Laurent) -> CellDeg {
        match v.degree() {
            Ok(d) => CellDeg::Exact(d),
            Err(_) => CellDeg::AtMost(v.degree_bound().finite().unwrap()),
        }
    }

    /// Whether `deg <= j` on the whole cell; `None` when undecided.
    pub fn le(self, j: i64) -> Option<bool> {
        match self {
            CellDeg::Exact(d) => Some(d <= Degree::Finite(j)),
            CellDeg::AtMost(b) if b <= j => Some(true),
            CellDeg::AtMost(_) => None,
        }
    }

    pub fn upper(self) -> Degree {
        match self {
            CellDeg::Exact(d) => d,
            CellDeg::AtMost(b) => Degree::Finite(b),
        }
    }

    pub fn max(self, o: CellDeg) -> CellDeg {
        match (self, o) {
            (CellDeg::Exact(a), CellDeg::Exact(b)) => CellDeg::Exact(a.max(b)),
            (CellDeg::Exact(a), CellDeg::AtMost(b)) | (CellDeg::AtMost(b), CellDeg::Exact(a)) => {
                if a > Degree::Finite(b) {
                    CellDeg::Exact(a)
                } else {
                    CellDeg::AtMost(b)
                }
            }
            (CellDeg::AtMost(a), CellDeg::AtMost(b)) => CellDeg::AtMost(a.max(b)),
        }
    }
}

/// Values of every component of a map on every cell.
#[derive(Debug, Clone)]
pub struct MapCells {
    pub grid: CellGrid,
    /// `values[cell][i] = f_i(cell)`.
    pub values: Vec<Vec<Laurent>>,
}

impl MapCells {
    pub fn degrees(&self, i: usize) -> Vec<CellDeg> {
        self.values.iter().map(|v| CellDeg::of(&v[i])).collect()
    }

    /// `c_0 + sum_i c_i f_i` on every cell.
    pub fn combination(&self, c: &[Laurent]) -> Vec<Laurent> {
        self.values
            .iter()
            .map(|v| v.iter().zip(&c[1..]).fold(c[0].clone(), |acc, (fi, ci)| acc.add(&fi.mul(ci))))
            .collect()
    }
}

/// Evaluate every component on every cell of the grid at resolution `res`.
pub fn eval_map_on_cells(f: &PolyMap, res: u32) -> Result<MapCells> {
    let grid = CellGrid::new(&f.field, f.d, res)?;
    let max_e = f.components.iter().map(MPoly::max_exponent).max().unwrap_or(0);
    let values = (0..grid.count())
        .map(|c| {
            let pw = powers(&f.field, &grid.point(c), max_e);
            f.components.iter().map(|g| g.eval_with_powers(&f.field, &pw)).collect()
        })
        .collect();
    Ok(MapCells { grid, values })
}
