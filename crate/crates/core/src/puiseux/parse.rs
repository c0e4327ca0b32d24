use num_bigint::BigInt;

use crate::arith::{BiPoly, Rational};
use crate::error::{Error, Result};

/// Parses a polynomial in `x`, `y` with rational coefficients.
///
/// Grammar: `+ - * ^`, parentheses, integer literals and `p/q` between two
/// integer literals. Exponents are non-negative integer literals. There is
/// no implicit multiplication.
pub fn parse(text: &str) -> Result<BiPoly<Rational>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn unexpected(&self) -> Error {
        match self.src.get(self.pos) {
            None => self.error("unexpected end of input"),
            Some(&c) => self.error(format!("unexpected '{}'", c as char)),
        }
    }

    fn expr(&mut self) -> Result<BiPoly<Rational>> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly<Rational>> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BiPoly<Rational>> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly<Rational>> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let e = self
            .integer()?
            .ok_or_else(|| self.error("expected a non-negative integer exponent"))?;
        let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
        Ok(base.pow(e))
    }

    fn integer(&mut self) -> Result<Option<BigInt>> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Some(digits.parse().expect("ascii digits")))
    }

    fn atom(&mut self) -> Result<BiPoly<Rational>> {
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
                let num = self.integer()?.expect("at a digit");
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self
                        .integer()?
                        .ok_or_else(|| self.error("expected an integer denominator"))?;
                    if den == BigInt::from(0) {
                        self.pos = save;
                        return Err(Error::DivisionByZero);
                    }
                    return Ok(BiPoly::constant(Rational::new(num, den)));
                }
                Ok(BiPoly::constant(Rational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"x" => Ok(BiPoly::x()),
                    b"y" => Ok(BiPoly::y()),
                    name => Err(Error::UnknownIdentifier {
                        offset: start,
                        name: String::from_utf8_lossy(name).into_owned(),
                    }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}
