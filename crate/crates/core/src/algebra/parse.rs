//! Text form of Laurent literals.
//!
//! ```text
//! literal := term ("+" term)* ["+" "O(T^" int ")"]
//! term    := coeff | coeff "*" "T" ["^" int] | "T" ["^" int]
//! coeff   := decimal in [0, p)  |  "[" c0 "," c1 "," ... "]"
//! ```
//!
//! Whitespace is insignificant. The optional `O(T^k)` tail marks every
//! coefficient of degree `<= k` as unknown.

use super::field::{Field, Fq};
use super::laurent::Laurent;
use super::ratfn::RatFn;
use crate::error::{Error, Result};

pub(crate) fn format_terms(field: &Field, terms: impl Iterator<Item = (i64, Fq)>) -> String {
    let mut parts = Vec::new();
    for (k, c) in terms {
        let cs = field.format_elem(c);
        let part = match (k, c == Fq::ONE) {
            (0, _) => cs,
            (1, true) => "T".to_string(),
            (1, false) => format!("{cs}*T"),
            (_, true) => format!("T^{k}"),
            (_, false) => format!("{cs}*T^{k}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Canonical literal of an exact or precision-tracked value.
pub fn format_laurent(a: &Laurent) -> String {
    a.to_string()
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn err(&self, msg: String) -> Error {
        Error::Syntax { pos: self.pos, msg }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number".into()));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "number too large".into() })
    }

    fn int(&mut self) -> Result<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }
}

fn parse_coeff(cur: &mut Cursor, field: &Field) -> Result<Fq> {
    if cur.eat(b'[') {
        let mut cs = Vec::new();
        loop {
            let v = cur.uint()?;
            if v >= field.p() as u64 {
                return Err(Error::CoefficientOutOfRange { value: v.to_string() });
            }
            cs.push(v as u32);
            if cur.eat(b']') {
                break;
            }
            cur.expect(b',')?;
        }
        return field.from_coeffs(&cs);
    }
    let v = cur.uint()?;
    if !field.is_prime_field() {
        // a bare integer names an element of the prime subfield
        if v >= field.p() as u64 {
            return Err(Error::CoefficientOutOfRange { value: v.to_string() });
        }
        return Ok(field.from_int(v as i64));
    }
    if v >= field.p() as u64 {
        return Err(Error::CoefficientOutOfRange { value: v.to_string() });
    }
    Ok(Fq(v as u32))
}

fn parse_t_power(cur: &mut Cursor) -> Result<i64> {
    cur.expect(b'T')?;
    if cur.eat(b'^') {
        cur.int()
    } else {
        Ok(1)
    }
}

fn parse_literal(cur: &mut Cursor, field: &Field) -> Result<Laurent> {
    let mut terms = Vec::new();
    let mut floor = None;
    loop {
        match cur.peek() {
            Some(b'O') => {
                cur.pos += 1;
                cur.expect(b'(')?;
                let k = parse_t_power(cur)?;
                cur.expect(b')')?;
                floor = Some(k + 1);
                break;
            }
            Some(b'T') => terms.push((parse_t_power(cur)?, Fq::ONE)),
            Some(c) if c == b'[' || c.is_ascii_digit() => {
                let c = parse_coeff(cur, field)?;
                if cur.eat(b'*') {
                    terms.push((parse_t_power(cur)?, c));
                } else {
                    terms.push((0, c));
                }
            }
            _ => return Err(cur.err("expected a term".into())),
        }
        if !cur.eat(b'+') {
            break;
        }
    }
    Ok(Laurent::from_terms(field, &terms, floor))
}

/// Parse a Laurent literal over `field`.
pub fn parse_laurent(text: &str, field: &Field) -> Result<Laurent> {
    let mut cur = Cursor { s: text.as_bytes(), pos: 0 };
    let a = parse_literal(&mut cur, field)?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input".into()));
    }
    Ok(a)
}

fn parse_group(cur: &mut Cursor, field: &Field) -> Result<RatFn> {
    let a = if cur.eat(b'(') {
        let a = parse_literal(cur, field)?;
        cur.expect(b')')?;
        a
    } else {
        parse_literal(cur, field)?
    };
    a.rational()
        .ok_or_else(|| cur.err("rational literals must be exact".into()))
}

/// Parse `A` or `(A)/(B)` where `A`, `B` are exact literals.
pub fn parse_rational(text: &str, field: &Field) -> Result<RatFn> {
    let mut cur = Cursor { s: text.as_bytes(), pos: 0 };
    let num = parse_group(&mut cur, field)?;
    let value = if cur.eat(b'/') {
        let den = parse_group(&mut cur, field)?;
        num.div(&den)?
    } else {
        num
    };
    if cur.peek().is_some() {
        return Err(cur.err("trailing input".into()));
    }
    Ok(value)
}
