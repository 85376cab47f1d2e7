//! Parser for the canonical polynomial text form.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['-'|'+'] term (('+'|'-') term)*
//! term   := power (('*' power) | ('/' integer))*
//! power  := atom ['^' ['-'] integer]
//! atom   := integer | ident | '(' expr ')'
//! ```
//! The identifier `i` denotes the imaginary unit when it is not a variable
//! name and the coefficient field has one.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polyalg::poly::{Poly, Vars};
use crate::polyalg::scalar::{Scalar, Q};

struct Parser<'a, F: Scalar> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
    _f: std::marker::PhantomData<F>,
}

impl<F: Scalar> Poly<F> {
    /// Parses the grammar produced by [`Poly::to_canonical_string`].
    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        let mut p = Parser::<F> {
            src: text.as_bytes(),
            pos: 0,
            vars,
            _f: std::marker::PhantomData,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl<'a, F: Scalar> Parser<'a, F> {
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<F>> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if neg {
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

    fn term(&mut self) -> Result<Poly<F>> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.power()?;
            } else if self.eat(b'/') {
                let d = self.integer()?;
                if d == BigInt::from(0) {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&F::from_q(Q::new(BigInt::from(1), d)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly<F>> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let e = self.integer()?;
        let e: u32 = e
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        if neg {
            let inv = base
                .monomial_inverse()
                .ok_or_else(|| self.err("negative power of a non-monomial"))?;
            Ok(inv.pow(e))
        } else {
            Ok(base.pow(e))
        }
    }

    fn atom(&mut self) -> Result<Poly<F>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(self.vars, F::from_q(Q::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if self.vars.contains(name) {
                    return Poly::var(self.vars, name);
                }
                if name == "i" {
                    if let Some(unit) = F::imaginary_unit() {
                        return Ok(Poly::constant(self.vars, unit));
                    }
                }
                Err(Error::UnknownVariable(name.to_string()))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::poly::VarSpace;
    use crate::polyalg::scalar::Gaussian;

    #[test]
    fn round_trip_rational() {
        let s = VarSpace::new(["a1", "a2", "b1"]);
        for text in ["2*a1*b1^2 - 1/2*a2", "0", "-3/4", "a1^2 + 2*a1*a2 + a2^2", "-b1^-1"] {
            let p = Poly::<Q>::parse(text, &s).unwrap();
            assert_eq!(p.to_canonical_string(), text);
        }
        let p = Poly::<Q>::parse("(a1 + b1)*(a1 - b1)", &s).unwrap();
        assert_eq!(p.to_canonical_string(), "a1^2 - b1^2");
    }

    #[test]
    fn gaussian_unit_and_errors() {
        let s = VarSpace::new(["x1"]);
        let p = Poly::<Gaussian>::parse("i*x1 + (1/2 - 3*i)", &s).unwrap();
        assert_eq!(p.to_canonical_string(), "i*x1 + (1/2 - 3*i)");
        assert_eq!(
            Poly::<Q>::parse("i*x1", &s).unwrap_err(),
            Error::UnknownVariable("i".into())
        );
        assert!(matches!(
            Poly::<Q>::parse("x1 +", &s),
            Err(Error::Parse { .. })
        ));
    }
}
