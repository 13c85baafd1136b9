//! Recursive-descent parser for the polynomial grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' UINT)?
//! atom   := UINT | 'x' UINT | '(' expr ')'
//! ```
//!
//! Products are expanded as they are parsed.

use num_bigint::BigInt;

use super::MultiPoly;
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 4096;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

pub(super) fn parse(text: &str, nvars: usize) -> Result<MultiPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.err("empty input"));
    }
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("exponent must be a nonnegative integer literal"));
            }
            let k: u32 =
                digits
                    .parse()
                    .ok()
                    .filter(|&k| k <= MAX_EXPONENT)
                    .ok_or(Error::Parse {
                        pos: start,
                        msg: format!("exponent too large (max {MAX_EXPONENT})"),
                    })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    return Err(self.err("expected variable index after 'x'"));
                }
                let index: usize = digits.parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "variable index too large".into(),
                })?;
                if index == 0 || index > self.nvars {
                    return Err(Error::VarOutOfRange {
                        index,
                        nvars: self.nvars,
                    });
                }
                Ok(MultiPoly::var(self.nvars, index - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let value: BigInt = digits.parse().expect("ascii digits");
                Ok(MultiPoly::constant(self.nvars, value))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
