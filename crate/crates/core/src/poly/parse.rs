//! Text grammar for polynomials.
//!
//! ```text
//! poly   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := number ('/' number)? | var ('^' int)? | '(' poly ')' ('^' int)?
//! var    := [A-Za-z_][A-Za-z0-9_#]*
//! ```
//!
//! Jet variables are written `name#level`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{PolyError, Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, PolyError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Token::Num(s.parse().expect("digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '#')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(PolyError::Syntax {
                    pos: i,
                    msg: format!("unexpected character {other:?}"),
                });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Token)>,
    pos: usize,
    ring: &'a Arc<Ring>,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::zero(self.ring);
        let mut negate = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                true
            }
            Some(Token::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Token::Plus) => negate = false,
                Some(Token::Minus) => negate = true,
                _ => break,
            }
            self.pos += 1;
            // tolerate a doubled sign such as `x + -2*y`
            while let Some(t @ (Token::Plus | Token::Minus)) = self.peek() {
                if *t == Token::Minus {
                    negate = !negate;
                }
                self.pos += 1;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n).or_else(|_| self.err("exponent too large"))
                }
                Some(Token::Minus) => Err(PolyError::NegativeExponent),
                _ => self.err("expected exponent"),
            }
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                let mut value = Rational::from_integer(n);
                if let Some(Token::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Token::Num(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            value /= Rational::from_integer(d);
                        }
                        _ => return self.err("expected nonzero denominator"),
                    }
                }
                let e = self.exponent()?;
                Ok(Polynomial::constant(
                    self.ring,
                    num_traits::pow(value, e as usize),
                ))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let idx = self
                    .ring
                    .var_index(&name)
                    .ok_or(PolyError::UnknownVariable(name))?;
                let e = self.exponent()?;
                Ok(Polynomial::var(self.ring, idx).pow(e))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.poly()?;
                match self.peek() {
                    Some(Token::RParen) => self.pos += 1,
                    _ => return self.err("expected ')'"),
                }
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

/// Parse `text` as a polynomial in `ring`.
pub fn parse_polynomial(text: &str, ring: &Arc<Ring>) -> Result<Polynomial, PolyError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Syntax {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        len: text.chars().count(),
    };
    let out = p.poly()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Variable-like identifiers in order of first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>, PolyError> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in tokenize(text)? {
        if let Token::Ident(s) = t {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn reads_binomial() {
        let ring = Ring::rational(&["x", "y", "z"]);
        let f = parse_polynomial("x*y - z^2", &ring).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(
            f.coefficient(&Monomial::from_exponents(&[1, 1, 0])),
            Rational::from_integer(1.into())
        );
        assert_eq!(
            f.coefficient(&Monomial::from_exponents(&[0, 0, 2])),
            Rational::from_integer((-1).into())
        );
    }

    #[test]
    fn zero_and_node() {
        let ring = Ring::rational(&["x", "y"]);
        assert!(parse_polynomial("0", &ring).unwrap().is_zero());
        assert_eq!(
            parse_polynomial("y^2 - x^2 - x^3", &ring)
                .unwrap()
                .num_terms(),
            3
        );
    }

    #[test]
    fn rational_coefficients_and_parentheses() {
        let ring = Ring::rational(&["x", "y"]);
        let f = parse_polynomial("3/2*(x+y)^2", &ring).unwrap();
        let g = parse_polynomial("3/2*x^2 + 3*x*y + 3/2*y^2", &ring).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn errors() {
        let ring = Ring::rational(&["x", "y"]);
        assert_eq!(
            parse_polynomial("x + w", &ring),
            Err(PolyError::UnknownVariable("w".into()))
        );
        assert_eq!(
            parse_polynomial("x^-2", &ring),
            Err(PolyError::NegativeExponent)
        );
        assert!(matches!(
            parse_polynomial("x + * y", &ring),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("(x + y", &ring),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("x $ y", &ring),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("1/0", &ring),
            Err(PolyError::Syntax { .. })
        ));
    }

    #[test]
    fn identifier_scan() {
        assert_eq!(
            identifiers("x^2, y#1*x, z3").unwrap_err(),
            PolyError::Syntax {
                pos: 3,
                msg: "unexpected character ','".into()
            }
        );
        assert_eq!(
            identifiers("x^2 + y#1*x + z3").unwrap(),
            vec!["x", "y#1", "z3"]
        );
    }
}
