//! Text grammar for polynomials over `Q(sqrt 3)`.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' uint]
//! atom   := number | 's' | 'mu1' | 'mu2' | 'mu3' | '(' expr ')'
//! number := digits ['.' digits]
//! ```
//!
//! `s` denotes `sqrt(3)`. Division is only allowed by nonzero constants, so
//! `1/s` and `(1/3)*s` both denote `1/sqrt(3)`. `#` starts a comment that
//! runs to the end of the line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Monomial, Poly3, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("non-integer exponent at position {pos}")]
    NonIntegerExponent { pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("division by a non-constant polynomial at position {pos}")]
    NonConstantDivisor { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
}

pub fn parse_poly(text: &str) -> Result<Poly3, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax("empty expression"));
    }
    let out = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
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

    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'#' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly3, ParseError> {
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

    fn term(&mut self) -> Result<Poly3, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.unary()?;
                let c = constant_value(&d).ok_or(ParseError::NonConstantDivisor { pos: at })?;
                let inv = c.inverse().ok_or(ParseError::DivisionByZero { pos: at })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly3, ParseError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly3, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(b'-') => return Err(ParseError::NegativeExponent { pos: at }),
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(ParseError::NonIntegerExponent { pos: at }),
        }
        let digits = self.digits();
        if self.peek() == Some(b'.') {
            return Err(ParseError::NonIntegerExponent { pos: at });
        }
        let e: u32 = digits.parse().map_err(|_| self.syntax("exponent out of range"))?;
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Poly3, ParseError> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Err(self.syntax("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            b'0'..=b'9' | b'.' => {
                let int = self.digits();
                let mut value = BigRational::from_integer(parse_int(&int));
                if self.peek() == Some(b'.') {
                    self.pos += 1;
                    let frac = self.digits();
                    if int.is_empty() && frac.is_empty() {
                        return Err(self.syntax("malformed number"));
                    }
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    value += BigRational::new(parse_int(&frac), scale);
                }
                Ok(Poly3::constant(Scalar::from_rational(value)))
            }
            b'm' if self.src[self.pos..].starts_with(b"mu") => {
                let start = self.pos;
                self.pos += 2;
                let idx = match self.peek() {
                    Some(b'1') => 0,
                    Some(b'2') => 1,
                    Some(b'3') => 2,
                    _ => {
                        self.pos = start;
                        return Err(self.syntax("expected mu1, mu2 or mu3"));
                    }
                };
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                    self.pos = start;
                    return Err(self.syntax("unknown identifier"));
                }
                Ok(Poly3::term(Scalar::one(), Monomial::var(idx)))
            }
            b's' => {
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                    self.pos -= 1;
                    return Err(self.syntax("unknown identifier"));
                }
                Ok(Poly3::constant(Scalar::sqrt3()))
            }
            _ => Err(self.syntax("unexpected character")),
        }
    }
}

fn parse_int(s: &str) -> BigInt {
    if s.is_empty() {
        BigInt::zero()
    } else {
        s.parse().expect("digit string")
    }
}

fn constant_value(p: &Poly3) -> Option<Scalar> {
    match p.degree() {
        -1 => Some(Scalar::zero()),
        0 => Some(p.coeff(&Monomial::ONE)),
        _ => None,
    }
}
