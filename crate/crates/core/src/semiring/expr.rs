//! A small expression language for exploded numbers, e.g. `3t^1 + 5t^1`,
//! `(1+i)t^1/2 * (1-i)t^1/2` or `0.5t^-2`.
//!
//! Integer and fraction literals are exact; literals with a decimal point
//! select the float backend. `t` and `i` take the backend of whatever they
//! combine with. Juxtaposition multiplies.

use num_bigint::BigInt;
use num_complex::Complex64;

use super::{Coefficient, Exploded, ExplodedValue, GaussianRational};
use crate::error::{Error, Result};
use crate::rational::{from_f64, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Decimal(f64),
    I,
    T,
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_digit() || chars[i + 1] == '.') {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                if text.contains('.') {
                    let v: f64 = text
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad decimal literal {text:?}")))?;
                    out.push(Token::Decimal(v));
                } else {
                    out.push(Token::Int(text.parse().expect("digits")));
                }
            }
            'i' => out.push(Token::I),
            't' => out.push(Token::T),
            '^' => out.push(Token::Caret),
            '+' => out.push(Token::Plus),
            '-' | '\u{2212}' => out.push(Token::Minus),
            '*' | '\u{b7}' => out.push(Token::Star),
            '/' => out.push(Token::Slash),
            '(' => out.push(Token::LParen),
            ')' => out.push(Token::RParen),
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

/// A partial result; `neutral` marks values built only from `t` and `i`.
#[derive(Clone, Debug)]
struct Term {
    value: ExplodedValue,
    neutral: bool,
}

impl Term {
    fn fixed(value: ExplodedValue) -> Self {
        Term { value, neutral: false }
    }

    fn promoted(&self) -> ExplodedValue {
        match &self.value {
            ExplodedValue::Exact(x) => ExplodedValue::Float(x.map_coeff(|c| c.to_complex64())),
            v => v.clone(),
        }
    }

    fn combine(
        self,
        rhs: Term,
        op: impl Fn(&ExplodedValue, &ExplodedValue) -> Result<ExplodedValue>,
    ) -> Result<Term> {
        let (a, b) = match (self.neutral, rhs.neutral, &self.value, &rhs.value) {
            (true, _, ExplodedValue::Exact(_), ExplodedValue::Float(_)) => (self.promoted(), rhs.value.clone()),
            (_, true, ExplodedValue::Float(_), ExplodedValue::Exact(_)) => (self.value.clone(), rhs.promoted()),
            _ => (self.value.clone(), rhs.value.clone()),
        };
        Ok(Term { value: op(&a, &b)?, neutral: self.neutral && rhs.neutral })
    }

    fn negate(self) -> Term {
        Term { value: self.value.negate(), neutral: self.neutral }
    }
}

fn exact(coeff: GaussianRational, exponent: Rational) -> ExplodedValue {
    ExplodedValue::Exact(Exploded::new(coeff, exponent))
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut acc = if self.peek() == Some(&Token::Minus) {
            self.next();
            self.term()?.negate()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    acc = acc.combine(self.term()?, ExplodedValue::try_add)?;
                }
                Some(Token::Minus) => {
                    self.next();
                    acc = acc.combine(self.term()?.negate(), ExplodedValue::try_add)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.primary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    acc = acc.combine(self.primary()?, ExplodedValue::try_mul)?;
                }
                Some(Token::Int(_) | Token::Decimal(_) | Token::I | Token::T | Token::LParen) => {
                    acc = acc.combine(self.primary()?, ExplodedValue::try_mul)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn primary(&mut self) -> Result<Term> {
        match self.next() {
            Some(Token::Int(n)) => {
                let q = if self.peek() == Some(&Token::Slash) {
                    self.next();
                    match self.next() {
                        Some(Token::Int(d)) if d != BigInt::from(0) => Rational::new(n, d),
                        other => return Err(Error::Parse(format!("bad denominator {other:?}"))),
                    }
                } else {
                    Rational::from_integer(n)
                };
                Ok(Term::fixed(exact(GaussianRational::from_rational(&q), Rational::from_integer(0.into()))))
            }
            Some(Token::Decimal(v)) => Ok(Term::fixed(ExplodedValue::Float(Exploded::iota(Complex64::new(v, 0.0))))),
            Some(Token::I) => Ok(Term { neutral: true, value: exact(
                GaussianRational::new(Rational::from_integer(0.into()), Rational::from_integer(1.into())),
                Rational::from_integer(0.into()),
            ) }),
            Some(Token::T) => {
                let e = if self.peek() == Some(&Token::Caret) {
                    self.next();
                    self.exponent()?
                } else {
                    Rational::from_integer(1.into())
                };
                Ok(Term { neutral: true, value: exact(GaussianRational::one(), e) })
            }
            Some(Token::LParen) => {
                let v = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn exponent(&mut self) -> Result<Rational> {
        let paren = self.peek() == Some(&Token::LParen);
        if paren {
            self.next();
        }
        let negative = if self.peek() == Some(&Token::Minus) {
            self.next();
            true
        } else {
            false
        };
        let q = match self.next() {
            Some(Token::Int(n)) => {
                if self.peek() == Some(&Token::Slash) {
                    self.next();
                    match self.next() {
                        Some(Token::Int(d)) if d != BigInt::from(0) => Rational::new(n, d),
                        other => return Err(Error::Parse(format!("bad exponent denominator {other:?}"))),
                    }
                } else {
                    Rational::from_integer(n)
                }
            }
            Some(Token::Decimal(v)) => from_f64(v)?,
            other => return Err(Error::Parse(format!("bad exponent {other:?}"))),
        };
        if paren {
            self.expect(Token::RParen)?;
        }
        Ok(if negative { -q } else { q })
    }
}

/// Parses and evaluates an exploded-number expression.
pub fn parse_expression(src: &str) -> Result<ExplodedValue> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(src: &str) -> String {
        parse_expression(src).unwrap().to_string()
    }

    #[test]
    fn evaluates_semiring_expressions() {
        assert_eq!(show("3t^1 + 5t^1"), "8t^1");
        assert_eq!(show("3t^1 + 5t^2"), "3t^1");
        assert_eq!(show("3t^1 * 2t^2"), "6t^3");
        assert_eq!(show("(1+i)t^1/2 * (1-i)t^1/2"), "2t^1");
        assert_eq!(show("3t^1 - 3t^1"), "0t^1");
        assert_eq!(show("5t^-1"), "5t^-1");
        assert_eq!(show("2i t^(-1/3)"), "(2i)t^-1/3");
        assert_eq!(show("t"), "1t^1");
        assert_eq!(show("6/4 t^0"), "3/2t^0");
    }

    #[test]
    fn mixed_backends_and_garbage_fail() {
        assert!(matches!(parse_expression("0.5t^1 + 3t^1"), Err(Error::BackendMismatch(_))));
        assert_eq!(parse_expression("0.5t^1 + 1.5t^1").unwrap().to_string(), "2t^1");
        assert_eq!(parse_expression("2.5i t^2").unwrap().to_string(), "(0+2.5i)t^2");
        assert!(parse_expression("3t^").is_err());
        assert!(parse_expression("(3t^1").is_err());
        assert!(parse_expression("3 $").is_err());
    }
}
