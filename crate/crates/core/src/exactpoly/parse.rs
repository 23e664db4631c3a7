//! Recursive-descent reader for `c*x1^a*x2^b + ...` with parentheses and
//! rational constants.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{PolyRing, Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Num(s.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { position: pos, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.offset(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign = if self.eat('-') {
            -Rational::one()
        } else {
            self.eat('+');
            Rational::one()
        };
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(&sign);
            if self.eat('+') {
                sign = Rational::one();
            } else if self.eat('-') {
                sign = -Rational::one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                if !d.is_constant() || d.is_zero() {
                    return self.err("division only by nonzero constants");
                }
                acc = acc.scale(&(Rational::one() / d.constant_term()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n.try_into().map_err(|_| Error::Parse { position: self.offset(), message: "exponent too large".into() })?;
                    Ok(base.pow(k))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring, Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => match self.ring.index_of(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.ring, i))
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

pub(crate) fn parse_polynomial(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { position: 0, message: "empty polynomial".into() });
    }
    let mut p = Parser { ring, toks, pos: 0, end: text.len() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Reads `n`, `-n` or `n/d`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse { position: 0, message: format!("not a rational number: '{text}'") };
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn whitespace_and_parentheses() {
        let r = PolyRing::grevlex(&["x", "y"]);
        let a = parse_polynomial(&r, " ( x + y ) ^ 2 - 2 * x*y ").unwrap();
        let b = parse_polynomial(&r, "x^2+y^2").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_polynomial(&r, "3/4*x").unwrap().to_string(), "3/4*x");
    }

    #[test]
    fn errors_carry_positions() {
        let r = PolyRing::grevlex(&["x"]);
        match parse_polynomial(&r, "x + w") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial(&r, "x/x").is_err());
        assert!(parse_polynomial(&r, "x +").is_err());
        assert!(parse_polynomial(&r, "").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
