//! Text literals for truncated series, e.g. `1+t^3+t^4` or
//! `t*(1+t^3+t^4)*(1+t^15)^2`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' ['-'] int]
//! atom   := int | 't' | '(' expr ')'
//! ```
//!
//! Integers are reduced mod `p`; negative exponents need an invertible
//! constant term.

use crate::error::{usage, Error, Result};
use crate::prime::Prime;
use crate::series::{NottinghamElt, UnitSeries};

/// A unit `1 + ...` known through degree `precision`.
pub fn parse_unit(s: &str, prime: Prime, precision: usize) -> Result<UnitSeries> {
    let f = Parser::new(s, prime, precision).run()?;
    if f[0] != 1 {
        return Err(usage(format!("{s:?} is not a unit of the form 1 + ...")));
    }
    let tail: Vec<i64> = f[1..=precision].iter().map(|&c| c as i64).collect();
    Ok(UnitSeries::from_coeffs(prime, &tail))
}

/// An element `t (1 + ...)` whose unit part is known through degree
/// `precision`.
pub fn parse_element(s: &str, prime: Prime, precision: usize) -> Result<NottinghamElt> {
    let f = Parser::new(s, prime, precision + 1).run()?;
    if f[0] != 0 || f[1] != 1 {
        return Err(usage(format!("{s:?} is not of the form t(1 + ...)")));
    }
    let tail: Vec<i64> = f[2..].iter().map(|&c| c as i64).collect();
    Ok(NottinghamElt::from_coeffs(prime, &tail))
}

type Series = Vec<u32>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    p: u32,
    /// Number of coefficients kept: degrees `0..len`.
    len: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str, prime: Prime, degree: usize) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
            p: prime.get(),
            len: degree + 1,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn run(mut self) -> Result<Series> {
        if self.peek().is_none() {
            return Err(self.err("empty input"));
        }
        let v = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected character"));
        }
        Ok(v)
    }

    fn constant(&self, c: u32) -> Series {
        let mut v = vec![0; self.len];
        v[0] = c % self.p;
        v
    }

    fn expr(&mut self) -> Result<Series> {
        let mut negate = false;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            self.neg(&mut acc);
        }
        loop {
            match self.peek() {
                Some(op @ (b'+' | b'-')) => {
                    self.pos += 1;
                    let mut rhs = self.term()?;
                    if op == b'-' {
                        self.neg(&mut rhs);
                    }
                    for (a, b) in acc.iter_mut().zip(&rhs) {
                        *a = (*a + b) % self.p;
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Series> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c == b't' || c == b'(' || c.is_ascii_digit() => {}
                _ => return Ok(acc),
            }
            let rhs = self.factor()?;
            acc = self.mul(&acc, &rhs);
        }
    }

    fn factor(&mut self) -> Result<Series> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let e = self.int()?;
        if negative {
            let inv = self.inverse(&base).ok_or_else(|| Error::Parse {
                offset: at,
                message: "negative power of a non-invertible series".into(),
            })?;
            Ok(self.pow(&inv, e))
        } else {
            Ok(self.pow(&base, e))
        }
    }

    fn atom(&mut self) -> Result<Series> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                let mut v = vec![0; self.len];
                if self.len > 1 {
                    v[1] = 1;
                }
                Ok(v)
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(self.constant((n % self.p as u64) as u32))
            }
            Some(_) => Err(self.err("expected 't', an integer or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "integer too large".into(),
            })
    }

    fn neg(&self, v: &mut Series) {
        for c in v.iter_mut() {
            *c = (self.p - *c) % self.p;
        }
    }

    fn mul(&self, a: &Series, b: &Series) -> Series {
        let mut out = vec![0u32; self.len];
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b[..self.len - i].iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        out
    }

    fn pow(&self, a: &Series, mut e: u64) -> Series {
        let mut acc = self.constant(1);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn inverse(&self, a: &Series) -> Option<Series> {
        let c = a[0];
        if c == 0 {
            return None;
        }
        let c_inv = Prime::new(self.p).ok()?.inv_mod_p(c as i64)?;
        let mut out = vec![0u32; self.len];
        out[0] = c_inv;
        for k in 1..self.len {
            let s: u32 = (1..=k).fold(0, |s, i| (s + a[i] * out[k - i]) % self.p);
            out[k] = (self.p - s) % self.p * c_inv % self.p;
        }
        Some(out)
    }
}
