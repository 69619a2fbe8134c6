//! Lattice expressions such as `U(2)+E8(-2)+<-4>`.
//!
//! ```text
//! Expr := Term ("+" Term)*
//! Term := "U" ["(" int ")"] | "E8" ["(" int ")"] | "<" int ">" | "Lambda"
//! ```
//! Whitespace between tokens is ignored.

use crate::error::{Error, Result};
use crate::lattice::Lattice;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: pos,
            message: message.into(),
        })
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

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => self.err(self.pos, format!("expected '{}', found '{}'", c as char, got as char)),
            None => self.err(self.pos, format!("expected '{}', found end of input", c as char)),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<(i64, usize)> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return self.err(start, "expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse::<i64>() {
            Ok(v) => Ok((v, start)),
            Err(_) => Err(Error::Overflow("integer literal exceeds 64 bits")),
        }
    }

    fn nonzero_int(&mut self, what: &str) -> Result<i64> {
        let (v, at) = self.int()?;
        if v == 0 {
            return self.err(at, format!("{what} must be nonzero"));
        }
        Ok(v)
    }

    fn optional_scale(&mut self) -> Result<i64> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let k = self.nonzero_int("scale")?;
            self.expect(b')')?;
            Ok(k)
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<Lattice> {
        let at = {
            self.skip_ws();
            self.pos
        };
        if self.keyword("Lambda") {
            Lattice::k3()
        } else if self.keyword("E8") {
            let k = self.optional_scale()?;
            Lattice::e8(k)
        } else if self.keyword("U") {
            let k = self.optional_scale()?;
            Lattice::hyperbolic(k)
        } else if self.peek() == Some(b'<') {
            self.pos += 1;
            let m = self.nonzero_int("rank-one entry")?;
            self.expect(b'>')?;
            Lattice::rank_one(m)
        } else if at >= self.src.len() {
            self.err(at, "expected a term, found end of input")
        } else {
            self.err(at, "expected one of U, E8, <m>, Lambda")
        }
    }
}

/// Parses a lattice expression into its block-diagonal Gram matrix.
pub fn parse_lattice_expr(text: &str) -> Result<Lattice> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms = vec![p.term()?];
    while let Some(c) = p.peek() {
        if c != b'+' {
            return p.err(p.pos, format!("unexpected '{}'", c as char));
        }
        p.pos += 1;
        terms.push(p.term()?);
    }
    if terms.len() == 1 {
        return Ok(terms.pop().expect("one term"));
    }
    let refs: Vec<&Lattice> = terms.iter().collect();
    Lattice::direct_sum(&refs)
}
