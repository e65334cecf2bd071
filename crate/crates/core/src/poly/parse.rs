//! Infix parser for polynomials over a context, e.g. `x1*y1 - z - z^2`.

use num_bigint::BigInt;

use super::{PolyError, Polynomial, RingContext};

impl RingContext {
    /// Parses an integer-coefficient polynomial expression built from `+`,
    /// `-`, `*`, `^` (non-negative integer exponents), parentheses, integer
    /// literals and the context's variable names. The result is canonical
    /// but not reduced by the relation.
    pub fn parse(&self, src: &str) -> Result<Polynomial, PolyError> {
        let mut p = Parser {
            ctx: self,
            src: src.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    ctx: &'a RingContext,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse {
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

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' {
                self.ctx.add(&acc, &rhs)
            } else {
                self.ctx.sub(&acc, &rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = self.ctx.mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.unary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.digits()?;
            let e: u32 = e.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(self.ctx.pow(&base, e));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(self.ctx.neg(&inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let c: BigInt = d.parse().map_err(|_| self.error("bad integer"))?;
                Ok(self.ctx.constant(c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.ctx.var(name)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<String, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}
