use std::fmt;

use crate::algebra::{parse_laurent, Field, Laurent, RatFn};
use crate::error::{Error, Result};

/// Polynomial in `d` variables with Laurent coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    /// `(exponents, coefficient)`, one exponent per variable.
    pub terms: Vec<(Vec<u32>, Laurent)>,
}

impl MPoly {
    pub fn constant(c: Laurent, d: usize) -> MPoly {
        MPoly { terms: vec![(vec![0; d], c)] }
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms.iter().flat_map(|t| t.0.iter().copied()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Laurent) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))).collect() }
    }

    /// Evaluate given `powers[k][e] = x_k^e`.
    pub fn eval_with_powers(&self, field: &Field, powers: &[Vec<Laurent>]) -> Laurent {
        let mut acc = Laurent::zero(field);
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (k, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[k][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn eval(&self, field: &Field, x: &[Laurent]) -> Laurent {
        self.eval_with_powers(field, &powers(field, x, self.max_exponent()))
    }

    /// Exact value at an exact point.
    pub fn eval_rational(&self, field: &Field, x: &[RatFn]) -> Option<RatFn> {
        let mut acc = RatFn::zero(field);
        for (exps, c) in &self.terms {
            let mut term = c.rational()?;
            for (k, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&x[k]);
                }
            }
            acc = acc.add(&term);
        }
        Some(acc)
    }
}

pub(crate) fn powers(field: &Field, x: &[Laurent], max_e: u32) -> Vec<Vec<Laurent>> {
    x.iter()
        .map(|xk| {
            let mut v = vec![Laurent::one(field)];
            for e in 1..=max_e as usize {
                let next = v[e - 1].mul(xk);
                v.push(next);
            }
            v
        })
        .collect()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (exps, c) in &self.terms {
            let mut factors = Vec::new();
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { format!("x{}", k + 1) } else { format!("x{}^{e}", k + 1) })
                .collect();
            if vars.is_empty() || *c != Laurent::one(c.field()) {
                factors.push(format!("({c})"));
            }
            factors.extend(vars);
            parts.push(factors.join("*"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Map `F^d -> F^n` with polynomial components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    pub field: Field,
    pub d: usize,
    pub components: Vec<MPoly>,
}

impl PolyMap {
    /// `x -> (x, x^2, ..., x^n)`.
    pub fn veronese(field: &Field, n: usize) -> PolyMap {
        let components = (1..=n as u32)
            .map(|e| MPoly { terms: vec![(vec![e], Laurent::one(field))] })
            .collect();
        PolyMap { field: field.clone(), d: 1, components }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// `c_0 + sum_i c_i f_i`.
    pub fn combination(&self, c: &[Laurent]) -> Result<MPoly> {
        if c.len() != self.n() + 1 {
            return Err(Error::InvalidInput(format!("need {} coefficients", self.n() + 1)));
        }
        let mut terms = vec![(vec![0; self.d], c[0].clone())];
        for (ci, f) in c[1..].iter().zip(&self.components) {
            terms.extend(f.scale(ci).terms);
        }
        Ok(MPoly { terms })
    }

    pub fn eval(&self, x: &[Laurent]) -> Vec<Laurent> {
        let max_e = self.components.iter().map(MPoly::max_exponent).max().unwrap_or(0);
        let pw = powers(&self.field, x, max_e);
        self.components.iter().map(|c| c.eval_with_powers(&self.field, &pw)).collect()
    }

    /// Parse a map file: header `q=<int> d=<int> n=<int>` (optionally
    /// `modulus=<c0,...>`), then one component per line. A component is a sum
    /// of monomials such as `(T^-1)*x1^2*x2 + x2 + (1)`.
    pub fn parse(text: &str) -> Result<PolyMap> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::InvalidInput("empty map file".into()))?;
        let (mut q, mut d, mut n, mut modulus) = (None, None, None, None);
        for kv in header.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::InvalidInput(format!("bad header field '{kv}'")))?;
            let num = || v.parse::<u32>().map_err(|_| Error::InvalidInput(format!("bad value '{v}'")));
            match k {
                "q" => q = Some(num()?),
                "d" => d = Some(num()? as usize),
                "n" => n = Some(num()? as usize),
                "modulus" => {
                    modulus = Some(
                        v.split(',')
                            .map(|c| c.parse::<u32>().map_err(|_| Error::InvalidInput(format!("bad modulus '{v}'"))))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(Error::InvalidInput(format!("unknown header key '{k}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::InvalidInput("header lacks q".into()))?;
        let d = d.ok_or_else(|| Error::InvalidInput("header lacks d".into()))?;
        let field = match modulus {
            Some(m) => {
                let p = (2..=q).find(|p| q % p == 0).unwrap_or(q);
                Field::extension(p, m)?
            }
            None => Field::builtin(q)?,
        };
        let components = lines.map(|l| parse_component(l, &field, d)).collect::<Result<Vec<_>>>()?;
        if let Some(n) = n {
            if n != components.len() {
                return Err(Error::InvalidInput(format!("header says n={n}, found {} components", components.len())));
            }
        }
        Ok(PolyMap { field, d, components })
    }
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_component(line: &str, field: &Field, d: usize) -> Result<MPoly> {
    let mut terms = Vec::new();
    for term in split_top(line, '+') {
        let mut exps = vec![0u32; d];
        let mut coeff = Laurent::one(field);
        for factor in split_top(term, '*') {
            let factor = factor.trim();
            if let Some(rest) = factor.strip_prefix('x') {
                let (var, e) = match rest.split_once('^') {
                    Some((v, e)) => (v, e.parse::<u32>().map_err(|_| Error::InvalidInput(format!("bad exponent in '{factor}'")))?),
                    None => (rest, 1),
                };
                let k = if var.is_empty() && d == 1 {
                    0
                } else {
                    var.parse::<usize>().ok().filter(|&k| (1..=d).contains(&k)).map(|k| k - 1).ok_or_else(|| {
                        Error::InvalidInput(format!("bad variable '{factor}'"))
                    })?
                };
                exps[k] += e;
            } else {
                let inner = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')).unwrap_or(factor);
                coeff = coeff.mul(&parse_laurent(inner, field)?);
            }
        }
        terms.push((exps, coeff));
    }
    Ok(MPoly { terms })
}
