//! A small recursive-descent parser for ring expressions.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := int | '(' expr ')' | identifier-with-suffix
//! ```
//! Identifiers and their bracketed/parenthesized suffixes are handed to a
//! caller-supplied callback so that scalars and algebra elements share one parser.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Operations a parsed value must support.
pub trait ExprValue: Sized + Clone {
    fn from_int(a: i128) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Result<Self, String>;
    fn div(&self, o: &Self) -> Result<Self, String>;
    fn pow(&self, n: i64) -> Result<Self, String>;
}

/// Character cursor over the input.
pub struct Cursor<'a> {
    s: &'a [u8],
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    /// Next byte without skipping whitespace.
    pub fn peek_raw(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    pub fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
    }

    pub fn int(&mut self) -> Result<i128, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError { pos: start, msg: "integer too large".into() })
    }

    pub fn signed_int(&mut self) -> Result<i128, ParseError> {
        let neg = self.eat(b'-');
        let v = self.int()?;
        Ok(if neg { -v } else { v })
    }

    pub fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            if self.pos == start && self.s[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            Some(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
        }
    }

    /// Raw text up to the matching closing delimiter (exclusive); consumes the delimiter.
    pub fn until(&mut self, close: u8) -> Result<String, ParseError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != close {
            self.pos += 1;
        }
        if self.pos == self.s.len() {
            return Err(ParseError { pos: start, msg: format!("unterminated, expected '{}'", close as char) });
        }
        let out = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        self.pos += 1;
        Ok(out)
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Callback resolving an identifier (already consumed) to a value.
pub type AtomFn<'f, V> = dyn Fn(&str, &mut Cursor) -> Result<V, ParseError> + 'f;

pub fn parse_expr<V: ExprValue>(s: &str, atom: &AtomFn<V>) -> Result<V, ParseError> {
    let mut c = Cursor::new(s);
    let v = expr(&mut c, atom)?;
    if !c.at_end() {
        return Err(c.err("unexpected trailing input"));
    }
    Ok(v)
}

fn lift<V>(c: &Cursor, r: Result<V, String>) -> Result<V, ParseError> {
    r.map_err(|m| c.err(m))
}

fn expr<V: ExprValue>(c: &mut Cursor, atom: &AtomFn<V>) -> Result<V, ParseError> {
    let neg = c.eat(b'-');
    let mut v = term(c, atom)?;
    if neg {
        v = V::from_int(0).sub(&v);
    }
    loop {
        if c.eat(b'+') {
            let t = term(c, atom)?;
            v = v.add(&t);
        } else if c.eat(b'-') {
            let t = term(c, atom)?;
            v = v.sub(&t);
        } else {
            return Ok(v);
        }
    }
}

fn term<V: ExprValue>(c: &mut Cursor, atom: &AtomFn<V>) -> Result<V, ParseError> {
    let mut v = factor(c, atom)?;
    loop {
        if c.eat(b'*') {
            let f = factor(c, atom)?;
            v = lift(c, v.mul(&f))?;
        } else if c.eat(b'/') {
            let f = factor(c, atom)?;
            v = lift(c, v.div(&f))?;
        } else {
            return Ok(v);
        }
    }
}

fn factor<V: ExprValue>(c: &mut Cursor, atom: &AtomFn<V>) -> Result<V, ParseError> {
    let base = primary(c, atom)?;
    if c.eat(b'^') {
        let n = c.signed_int()?;
        return lift(c, base.pow(n as i64));
    }
    Ok(base)
}

fn primary<V: ExprValue>(c: &mut Cursor, atom: &AtomFn<V>) -> Result<V, ParseError> {
    match c.peek() {
        Some(b'(') => {
            c.pos += 1;
            let v = expr(c, atom)?;
            c.expect(b')')?;
            Ok(v)
        }
        Some(b'-') => {
            c.pos += 1;
            let v = factor(c, atom)?;
            Ok(V::from_int(0).sub(&v))
        }
        Some(ch) if ch.is_ascii_digit() => Ok(V::from_int(c.int()?)),
        Some(_) => {
            let start = c.pos;
            match c.ident() {
                Some(id) => atom(&id, c),
                None => Err(ParseError { pos: start, msg: "unexpected character".into() }),
            }
        }
        None => Err(c.err("unexpected end of input")),
    }
}
