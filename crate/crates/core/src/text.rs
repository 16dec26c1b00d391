//! Text forms of scalars and noncommutative polynomials.
//!
//! Grammar: `expr := ['-'] term (('+'|'-') term)*`,
//! `term := factor (('*'|'/') factor)*`, `factor := atom ['^' ['-'] int]`,
//! `atom := int | name | '(' expr ')'`. `*` concatenates words, `^`
//! repeats, and division is only by scalars.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NcPoly};
use crate::scalars::{FieldElement, ParamSpace};

pub fn parse_scalar(text: &str, space: &ParamSpace) -> Result<FieldElement> {
    let empty = Alphabet::default();
    let p = parse_nc(text, &empty, space)?;
    Ok(p.as_scalar().expect("no generators in scope"))
}

pub fn parse_nc(text: &str, alphabet: &Alphabet, space: &ParamSpace) -> Result<NcPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, alphabet, space };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
    space: &'a ParamSpace,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.factor()?;
                let s = d.as_scalar().ok_or(Error::Syntax { offset: at, message: "division by a non-scalar".into() })?;
                let inv = s.inv().map_err(|_| Error::Syntax { offset: at, message: "division by zero".into() })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<NcPoly> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let at = self.pos;
        let e = self.integer()?.ok_or_else(|| self.err("expected exponent"))?;
        let e: i64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
        if neg {
            let s = base.as_scalar().ok_or(Error::Syntax { offset: at, message: "negative power of a non-scalar".into() })?;
            let v = s.pow(-e).map_err(|_| Error::Syntax { offset: at, message: "division by zero".into() })?;
            return Ok(NcPoly::scalar(v));
        }
        Ok(base.pow(e as u32))
    }

    fn integer(&mut self) -> Result<Option<BigInt>> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(Some(s.parse().map_err(|_| self.err("bad integer"))?))
    }

    fn atom(&mut self) -> Result<NcPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?.unwrap();
                Ok(NcPoly::scalar(FieldElement::from_rational(BigRational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_' || self.src[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(g) = self.alphabet.index_of(name) {
                    Ok(NcPoly::generator(g))
                } else if let Some(i) = self.space.index_of(name) {
                    Ok(NcPoly::scalar(FieldElement::param(i)))
                } else {
                    self.pos = start;
                    Err(self.err(&format!("unknown name '{name}'")))
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// True when `name` can be used as a parameter or generator identifier.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn join<I: IntoIterator<Item = String>>(items: I, sep: &str) -> String {
    let mut out = String::new();
    for (i, s) in items.into_iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(&s);
    }
    out
}
