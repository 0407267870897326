//! Recursive-descent parser for the polynomial text format.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coeff | var ['^' int] | '(' expr ')' ['^' int]
//! coeff  := int | int '/' int
//! ```
//! Variables are `x y z X Y Z` (case-significant).

use super::field::{Fe, Rational};
use super::mpoly::MultiPoly;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

pub const ALL_VARS: [&str; 6] = ["X", "Y", "Z", "x", "y", "z"];
const MAX_EXPONENT: u32 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable { name: String, line: usize, column: usize },
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    allowed: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error<T>(&self, pos: usize, message: &str) -> Result<T, ParseError> {
        let (line, column) = self.location(pos);
        Err(ParseError::SyntaxError { line, column, message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error(start, "expected an integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().unwrap())
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = self.pos;
        let n = self.integer()?;
        match u32::try_from(n) {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => self.error(at, "exponent too large"),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat('-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let Some(c) = self.peek() else {
            return self.error(self.pos, "unexpected end of input");
        };
        let start = self.pos;
        if c.is_ascii_digit() {
            let n = self.integer()?;
            let mut r = Rational::from_integer(n);
            if self.eat('/') {
                let at = self.pos;
                let d = self.integer()?;
                if d.is_zero() {
                    return self.error(at, "zero denominator");
                }
                r /= Rational::from_integer(d);
            }
            return Ok(MultiPoly::constant(self.allowed, Fe::Rat(r)));
        }
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(')') {
                return self.error(self.pos, "expected `)`");
            }
            if self.eat('^') {
                let e = self.exponent()?;
                return Ok(inner.pow(e));
            }
            return Ok(inner);
        }
        if c.is_alphabetic() || c == '_' {
            while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            let Some(i) = self.allowed.iter().position(|v| *v == name) else {
                let (line, column) = self.location(start);
                return Err(ParseError::UnknownVariable { name, line, column });
            };
            let v = MultiPoly::var(self.allowed, i);
            if self.eat('^') {
                let e = self.exponent()?;
                return Ok(v.pow(e));
            }
            return Ok(v);
        }
        self.error(start, &format!("unexpected character `{}`", c))
    }
}

fn parse_all(text: &str, allowed: &[&str]) -> Result<MultiPoly, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, allowed };
    let poly = p.expr()?;
    if p.peek().is_some() {
        return p.error(p.pos, "unexpected trailing input");
    }
    Ok(poly)
}

/// Parses a polynomial; its variables are the ones that occur, in
/// lexicographic order.
pub fn parse_poly(text: &str) -> Result<MultiPoly, ParseError> {
    let p = parse_all(text, &ALL_VARS)?;
    let used: Vec<&str> = ALL_VARS.iter().enumerate().filter(|(i, _)| p.degree_in(*i) > 0).map(|(_, v)| *v).collect();
    Ok(p.with_vars(&used))
}

/// Parses a polynomial over the given variables; any other identifier is
/// an [`ParseError::UnknownVariable`].
pub fn parse_poly_in(text: &str, vars: &[&str]) -> Result<MultiPoly, ParseError> {
    parse_all(text, vars)
}
