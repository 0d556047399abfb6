//! Lattices over Λ = F_q[T] inside F^k.
//!
//! A module is given by the rows of a [`PolyMat`]. Reduction brings the rows into
//! shifted weak Popov form: every row attains its shifted degree at a distinct
//! pivot column (the rightmost column attaining the maximum). Such a basis is
//! orthogonal for the sup-degree norm, so its row degrees are the successive
//! minima and greedy rounding against pivots solves the closest vector problem
//! exactly.

use std::fmt::Write as _;

use crate::algebra::{parse_laurent, Degree, Field, Fq, Laurent, LaurentVec, Poly};
use crate::error::{Error, Result};

/// Per-column integer weights added to entry degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shift(pub Vec<i64>);

impl Shift {
    pub fn zero(k: usize) -> Shift {
        Shift(vec![0; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Row basis of a Λ-module. Column `j` is stored divided by `T^{col_scale[j]}`,
/// so the true entry is `entry * T^{col_scale[j]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    field: Field,
    rows: Vec<Vec<Poly>>,
    col_scale: Vec<i64>,
}

impl PolyMat {
    pub fn new(field: &Field, rows: Vec<Vec<Poly>>) -> Result<PolyMat> {
        let k = rows.first().map_or(0, |r| r.len());
        PolyMat::with_scale(field, rows, vec![0; k])
    }

    pub fn with_scale(field: &Field, rows: Vec<Vec<Poly>>, col_scale: Vec<i64>) -> Result<PolyMat> {
        if rows.is_empty() || rows.iter().any(|r| r.len() != col_scale.len()) || col_scale.is_empty() {
            return Err(Error::InvalidInput("polynomial matrix must be rectangular and nonempty".into()));
        }
        Ok(PolyMat { field: field.clone(), rows, col_scale })
    }

    /// Clear Laurent entries into polynomials: column `j` keeps the digits at
    /// degrees `>= col_scale[j]`. Fails if any of those digits is unknown.
    pub fn from_laurent_rows(rows: &[Vec<Laurent>], col_scale: Vec<i64>) -> Result<PolyMat> {
        let field = rows
            .first()
            .and_then(|r| r.first())
            .map(|x| x.field().clone())
            .ok_or_else(|| Error::InvalidInput("empty matrix".into()))?;
        let polys = rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&col_scale)
                    .map(|(x, &c)| x.scaled_integer_part(-c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PolyMat::with_scale(&field, polys, col_scale)
    }

    pub fn identity(field: &Field, k: usize) -> PolyMat {
        let rows = (0..k)
            .map(|i| (0..k).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect())
            .collect();
        PolyMat { field: field.clone(), rows, col_scale: vec![0; k] }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_scale.len()
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn col_scale(&self) -> &[i64] {
        &self.col_scale
    }

    /// Shift plus column scaling: the weights that act on stored entries.
    pub fn effective_shift(&self, s: &Shift) -> Vec<i64> {
        self.col_scale.iter().zip(&s.0).map(|(a, b)| a + b).collect()
    }

    /// Product `self * other` of stored polynomial entries (scales ignored).
    pub fn mul(&self, other: &PolyMat) -> Result<PolyMat> {
        if self.ncols() != other.nrows() {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols())
                    .map(|j| {
                        r.iter()
                            .zip(other.rows.iter())
                            .fold(Poly::zero(f), |acc, (a, orow)| &acc + &(a * &orow[j]))
                    })
                    .collect()
            })
            .collect();
        PolyMat::with_scale(f, rows, other.col_scale.clone())
    }

    /// Determinant of the stored polynomial matrix (fraction-free elimination).
    pub fn det(&self) -> Result<Poly> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let f = &self.field;
        let mut a = self.rows.clone();
        let mut negate = false;
        let mut prev = Poly::one(f);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Poly::zero(f));
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    let (quot, rem) = num.divmod(&prev)?;
                    debug_assert!(rem.is_zero());
                    a[i][j] = quot;
                }
                a[i][k] = Poly::zero(f);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }
}

/// Shifted degree and pivot column of one row.
pub(crate) fn row_degree(row: &[Poly], eff: &[i64]) -> Option<(i64, usize)> {
    let mut best: Option<(i64, usize)> = None;
    for (j, p) in row.iter().enumerate() {
        if let Some(d) = p.deg_usize() {
            let sd = d as i64 + eff[j];
            if best.is_none_or(|(b, _)| sd >= b) {
                best = Some((sd, j));
            }
        }
    }
    best
}

fn add_row_multiple(target: &mut [Poly], src: &[Poly], c: Fq, k: usize) {
    for (t, s) in target.iter_mut().zip(src) {
        t.add_scaled_shifted(s, c, k);
    }
}

/// In-place shifted weak Popov reduction of `rows` (Mulders–Storjohann simple
/// transformations). Returns `(shifted degree, pivot column)` per row.
pub(crate) fn reduce_rows(
    field: &Field,
    rows: &mut [Vec<Poly>],
    eff: &[i64],
    mut transform: Option<&mut [Vec<Poly>]>,
) -> Result<Vec<(i64, usize)>> {
    let k = eff.len();
    let mut info: Vec<(i64, usize)> = rows
        .iter()
        .map(|r| row_degree(r, eff).ok_or(Error::RankDeficient))
        .collect::<Result<_>>()?;
    loop {
        // lowest pivot column with a collision
        let mut owner: Vec<Option<usize>> = vec![None; k];
        let mut collision = None;
        for (i, &(d, j)) in info.iter().enumerate() {
            match owner[j] {
                None => owner[j] = Some(i),
                Some(o) => {
                    let (od, _) = info[o];
                    // reducer: smaller degree, ties to the lower row index
                    let (reducer, target) = if d < od { (i, o) } else { (o, i) };
                    if d < od {
                        owner[j] = Some(i);
                    }
                    if collision.is_none_or(|(_, _, cj)| j < cj) {
                        collision = Some((reducer, target, j));
                    }
                }
            }
        }
        let Some((r, t, j)) = collision else {
            return Ok(info);
        };
        let (dr, _) = info[r];
        let (dt, _) = info[t];
        let lc_r = rows[r][j].lc();
        let lc_t = rows[t][j].lc();
        let c = field.neg(field.div(lc_t, lc_r)?);
        let shift = (dt - dr) as usize;
        let src = rows[r].clone();
        add_row_multiple(&mut rows[t], &src, c, shift);
        if let Some(u) = transform.as_deref_mut() {
            let usrc = u[r].clone();
            add_row_multiple(&mut u[t], &usrc, c, shift);
        }
        info[t] = row_degree(&rows[t], eff).ok_or(Error::RankDeficient)?;
    }
}

/// Basis in shifted weak Popov form together with its unimodular transform.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    /// Reduced rows `R = U * M`.
    pub reduced: PolyMat,
    /// Unimodular transform `U`.
    pub transform: PolyMat,
    /// Per row: pivot column and shifted degree.
    pub pivots: Vec<(usize, i64)>,
    pub shift: Shift,
}

impl ReducedBasis {
    fn eff(&self) -> Vec<i64> {
        self.reduced.effective_shift(&self.shift)
    }

    pub fn row_degrees(&self) -> Vec<i64> {
        self.pivots.iter().map(|p| p.1).collect()
    }
}

/// Reduce `m` to `s`-shifted weak Popov form.
pub fn weak_popov(m: &PolyMat, s: &Shift) -> Result<ReducedBasis> {
    if s.len() != m.ncols() {
        return Err(Error::InvalidInput(format!("shift has {} entries, matrix has {} columns", s.len(), m.ncols())));
    }
    if m.nrows() > m.ncols() {
        return Err(Error::RankDeficient);
    }
    let eff = m.effective_shift(s);
    let mut rows = m.rows.clone();
    let mut u = PolyMat::identity(&m.field, m.nrows()).rows;
    let info = reduce_rows(&m.field, &mut rows, &eff, Some(&mut u))?;
    Ok(ReducedBasis {
        reduced: PolyMat { field: m.field.clone(), rows, col_scale: m.col_scale.clone() },
        transform: PolyMat { field: m.field.clone(), rows: u, col_scale: vec![0; m.nrows()] },
        pivots: info.into_iter().map(|(d, j)| (j, d)).collect(),
        shift: s.clone(),
    })
}

/// Sorted shifted row degrees: the successive minima of the module.
pub fn successive_minima(r: &ReducedBasis) -> Vec<i64> {
    let mut d = r.row_degrees();
    d.sort_unstable();
    d
}

/// Row of least shifted degree (lowest index on ties).
pub fn shortest_vector(r: &ReducedBasis) -> (Vec<Poly>, i64) {
    let (i, d) = r
        .pivots
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.1))
        .min_by_key(|&(i, d)| (d, i))
        .expect("nonempty basis");
    (r.reduced.rows[i].clone(), d)
}

/// Greedy rounding of a polynomial target against pivot rows. Returns the
/// residual `w - v` and the combination coefficients of `v`.
pub(crate) fn babai_residual(
    field: &Field,
    rows: &[Vec<Poly>],
    info: &[(i64, usize)],
    eff: &[i64],
    target: &[Poly],
) -> Result<(Vec<Poly>, Vec<Poly>)> {
    let mut by_pivot: Vec<Option<usize>> = vec![None; eff.len()];
    for (i, &(_, j)) in info.iter().enumerate() {
        by_pivot[j] = Some(i);
    }
    let mut res = target.to_vec();
    let mut comb = vec![Poly::zero(field); rows.len()];
    while let Some((d, j)) = row_degree(&res, eff) {
        let Some(i) = by_pivot[j] else { break };
        let di = info[i].0;
        if di > d {
            break;
        }
        let c = field.div(res[j].lc(), rows[i][j].lc())?;
        let k = (d - di) as usize;
        add_row_multiple(&mut res, &rows[i], field.neg(c), k);
        comb[i].add_scaled_shifted(&Poly::one(field), c, k);
    }
    Ok((res, comb))
}

/// Exact closest vector for the shifted sup-degree distance.
///
/// `w` is given in true coordinates. Returns the module vector (stored
/// coordinates, i.e. divided by the column scaling) and
/// `min_v max_j (deg(w_j - v_j T^{scale_j}) + s_j)`.
pub fn closest_vector(r: &ReducedBasis, w: &LaurentVec) -> Result<(Vec<Poly>, Degree)> {
    let m = &r.reduced;
    if w.len() != m.ncols() {
        return Err(Error::InvalidInput("target dimension mismatch".into()));
    }
    let eff = r.eff();
    let target: Vec<Poly> = w
        .0
        .iter()
        .zip(m.col_scale())
        .map(|(x, &c)| x.scaled_integer_part(-c))
        .collect::<Result<_>>()?;
    let info: Vec<(i64, usize)> = r.pivots.iter().map(|&(j, d)| (d, j)).collect();
    let (res, _) = babai_residual(&m.field, &m.rows, &info, &eff, &target)?;
    let v: Vec<Poly> = target.iter().zip(&res).map(|(a, b)| a - b).collect();
    let dist = shifted_distance(w, &v, m.col_scale(), &r.shift.0)?;
    Ok((v, dist))
}

/// `max_j deg(w_j - v_j T^{scale_j}) + s_j`, resolving ambiguity where possible.
pub fn shifted_distance(w: &LaurentVec, v: &[Poly], scale: &[i64], s: &[i64]) -> Result<Degree> {
    let mut known = Degree::NegInf;
    let mut ambiguous = Degree::NegInf;
    for (j, x) in w.0.iter().enumerate() {
        let diff = x.sub(&Laurent::from_poly(&v[j]).shift(scale[j]));
        match diff.degree() {
            Ok(d) => known = known.max(d + s[j]),
            Err(_) => ambiguous = ambiguous.max(diff.degree_bound() + s[j]),
        }
    }
    if ambiguous > known || (ambiguous == known && !known.is_neg_inf()) {
        return Err(Error::PrecisionExhausted("distance depends on unknown target digits".into()));
    }
    Ok(known)
}

/// A matrix file: header `q=<int> rows=<int> cols=<int> shift=<s1,...>` (optionally
/// `modulus=<c0,c1,...>` for extension fields), then one row per line with
/// entries separated by ` | `.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub field: Field,
    pub entries: Vec<Vec<Laurent>>,
    pub shift: Vec<i64>,
}

fn parse_list(v: &str) -> Result<Vec<i64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad integer '{x}'"))))
        .collect()
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<MatrixFile> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::InvalidInput("empty matrix file".into()))?;
        let (mut q, mut rows, mut cols, mut shift, mut modulus) = (None, None, None, None, None);
        for kv in header.split_whitespace() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("bad header field '{kv}'")))?;
            let num = || v.parse::<u32>().map_err(|_| Error::InvalidInput(format!("bad value '{v}'")));
            match k {
                "q" => q = Some(num()?),
                "rows" => rows = Some(num()? as usize),
                "cols" => cols = Some(num()? as usize),
                "shift" => shift = Some(parse_list(v)?),
                "modulus" => modulus = Some(parse_list(v)?),
                _ => return Err(Error::InvalidInput(format!("unknown header key '{k}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::InvalidInput("header lacks q".into()))?;
        let rows = rows.ok_or_else(|| Error::InvalidInput("header lacks rows".into()))?;
        let cols = cols.ok_or_else(|| Error::InvalidInput("header lacks cols".into()))?;
        let field = match modulus {
            Some(m) => {
                let p = (2..=q).find(|p| q % p == 0).unwrap_or(q);
                let f = Field::extension(p, m.into_iter().map(|c| c as u32).collect())?;
                if f.q() != q {
                    return Err(Error::InvalidField(format!("modulus gives q = {}, header says {q}", f.q())));
                }
                f
            }
            None => Field::builtin(q)?,
        };
        let entries = lines
            .map(|l| l.split('|').map(|e| parse_laurent(e, &field)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput(format!("expected {rows} rows of {cols} entries")));
        }
        Ok(MatrixFile { field, entries, shift: shift.unwrap_or_default() })
    }

    pub fn format(&self) -> String {
        let mut out = format!(
            "q={} rows={} cols={} shift={}",
            self.field.q(),
            self.entries.len(),
            self.entries.first().map_or(0, |r| r.len()),
            self.shift.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
        );
        if !self.field.is_prime_field() {
            let m: Vec<String> = self.field.modulus().iter().map(|c| c.to_string()).collect();
            write!(out, " modulus={}", m.join(",")).unwrap();
        }
        out.push('\n');
        for r in &self.entries {
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            out.push_str(&parts.join(" | "));
            out.push('\n');
        }
        out
    }
}
