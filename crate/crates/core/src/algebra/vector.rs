use super::degree::Degree;
use super::field::Field;
use super::laurent::Laurent;
use crate::error::{Error, Result};

/// A vector in F^d with the sup norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentVec(pub Vec<Laurent>);

impl LaurentVec {
    pub fn zeros(field: &Field, d: usize) -> LaurentVec {
        LaurentVec(vec![Laurent::zero(field); d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `max_i deg x_i`; fails if any entry's degree is unresolvable.
    pub fn sup_norm(&self) -> Result<Degree> {
        self.0.iter().try_fold(Degree::NegInf, |m, x| Ok(m.max(x.degree()?)))
    }

    /// Coarsest floor over the entries (`None` when all are exact).
    pub fn floor(&self) -> Option<i64> {
        self.0.iter().filter_map(|x| x.floor()).max()
    }
}

/// An m x n matrix over F, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMat {
    rows: usize,
    cols: usize,
    data: Vec<Laurent>,
}

impl LaurentMat {
    pub fn from_rows(rows: Vec<Vec<Laurent>>) -> Result<LaurentMat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidInput("matrix must be rectangular and nonempty".into()));
        }
        Ok(LaurentMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> LaurentMat {
        LaurentMat { rows, cols, data: vec![Laurent::zero(field); rows * cols] }
    }

    /// A single row `(y_1, ..., y_n)`, i.e. one linear form.
    pub fn row(v: &LaurentVec) -> LaurentMat {
        LaurentMat { rows: 1, cols: v.len(), data: v.0.clone() }
    }

    /// A single column, i.e. n simultaneous numbers.
    pub fn column(v: &LaurentVec) -> LaurentMat {
        LaurentMat { rows: v.len(), cols: 1, data: v.0.clone() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        self.data[0].field()
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Laurent) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_vec(&self, i: usize) -> LaurentVec {
        LaurentVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn transpose(&self) -> LaurentMat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        LaurentMat { rows: self.cols, cols: self.rows, data }
    }

    pub fn entries(&self) -> &[Laurent] {
        &self.data
    }

    pub fn sup_norm(&self) -> Result<Degree> {
        LaurentVec(self.data.clone()).sup_norm()
    }

    /// Coarsest floor over the entries (`None` when all are exact).
    pub fn floor(&self) -> Option<i64> {
        self.data.iter().filter_map(|x| x.floor()).max()
    }
}

impl serde::Serialize for LaurentVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}
