//! Text form of polynomials.
//!
//! Grammar: `expr := '-'? term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
//! `factor := atom ('^' uint)?`, `atom := int | int '/' int | ident | '(' expr ')'`.
//! Printing emits terms in descending graded-lex order and re-parses to the same
//! polynomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{MultiPoly, PolyRing};
use super::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    BadExponent(String),
    BadCoefficient(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at position {pos}: {}", describe(.kind))]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(msg) => format!("syntax error: {msg}"),
        ParseErrorKind::UnknownVariable(v) => format!("unknown variable `{v}`"),
        ParseErrorKind::BadExponent(e) => format!("exponent must be a non-negative integer, found `{e}`"),
        ParseErrorKind::BadCoefficient(c) => format!("coefficient `{c}` is not in the coefficient ring"),
    }
}

pub fn parse_poly<C: Scalar>(ring: &Arc<PolyRing>, text: &str) -> Result<MultiPoly<C>, ParseError> {
    let mut p = Parser { ring, src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error(ParseErrorKind::Syntax("empty expression".into())));
    }
    let out = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(ParseErrorKind::Syntax(format!("unexpected `{}`", p.peek_char()))));
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos, kind }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<C: Scalar>(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Scalar>(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor<C: Scalar>(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        let bad = |s: &str| ParseError { pos: start, kind: ParseErrorKind::BadExponent(s.to_string()) };
        if digits.is_empty() {
            let mut end = self.pos;
            if self.peek() == Some(b'-') {
                end += 1;
                while matches!(self.src.get(end), Some(b) if b.is_ascii_digit() || *b == b'.') {
                    end += 1;
                }
                return Err(bad(&String::from_utf8_lossy(&self.src[start..end])));
            }
            return Err(self.error(ParseErrorKind::Syntax("expected exponent after `^`".into())));
        }
        if self.peek() == Some(b'.') {
            let mut end = self.pos + 1;
            while matches!(self.src.get(end), Some(b) if b.is_ascii_digit()) {
                end += 1;
            }
            return Err(bad(&String::from_utf8_lossy(&self.src[start..end])));
        }
        let e: u32 = digits.parse().map_err(|_| bad(&digits))?;
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom<C: Scalar>(&mut self) -> Result<MultiPoly<C>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(ParseErrorKind::Syntax("expected `)`".into())));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit string");
                let save = self.pos;
                let mut den = BigInt::one();
                if self.eat(b'/') {
                    self.skip_ws();
                    let d = self.digits();
                    if d.is_empty() {
                        self.pos = save;
                        return Err(self.error(ParseErrorKind::Syntax("expected integer after `/`".into())));
                    }
                    den = d.parse().expect("digit string");
                }
                let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                if den.is_zero() {
                    return Err(ParseError { pos: start, kind: ParseErrorKind::BadCoefficient(text) });
                }
                let c = C::from_ratio(&num, &den)
                    .ok_or(ParseError { pos: start, kind: ParseErrorKind::BadCoefficient(text) })?;
                Ok(MultiPoly::constant(self.ring, c))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.index_of(name) {
                    Some(i) => Ok(MultiPoly::var_at(self.ring, i)),
                    None => Err(ParseError { pos: start, kind: ParseErrorKind::UnknownVariable(name.to_string()) }),
                }
            }
            None => Err(self.error(ParseErrorKind::Syntax("unexpected end of input".into()))),
            Some(_) => Err(self.error(ParseErrorKind::Syntax(format!("unexpected `{}`", self.peek_char())))),
        }
    }
}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ring = self.ring();
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative_sign();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if !mag.is_one() || m.is_one() {
                write!(f, "{mag}")?;
                first = false;
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", ring.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
