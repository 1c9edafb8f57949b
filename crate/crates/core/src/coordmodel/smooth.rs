//! Closed expression language for smooth factors: rational functions in the
//! real coordinates `x1, x2, ...` and the smooth coordinates `w1, w2, ...`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::semiring::{Coefficient, GaussianRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    /// Real coordinate, zero-based.
    Real(usize),
    /// Smooth coordinate `z^{alpha^j}`, zero-based.
    Smooth(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmoothExpr {
    Const(GaussianRational),
    Var(Var),
    Neg(Box<SmoothExpr>),
    Add(Box<SmoothExpr>, Box<SmoothExpr>),
    Sub(Box<SmoothExpr>, Box<SmoothExpr>),
    Mul(Box<SmoothExpr>, Box<SmoothExpr>),
    Div(Box<SmoothExpr>, Box<SmoothExpr>),
    Pow(Box<SmoothExpr>, i64),
}

impl SmoothExpr {
    pub fn one() -> Self {
        SmoothExpr::Const(GaussianRational::new(Rational::from_integer(1.into()), Rational::zero()))
    }

    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in smooth factor {src:?}")));
        }
        Ok(e)
    }

    /// Largest real and smooth variable index used, plus one.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            SmoothExpr::Const(_) => (0, 0),
            SmoothExpr::Var(Var::Real(i)) => (i + 1, 0),
            SmoothExpr::Var(Var::Smooth(j)) => (0, j + 1),
            SmoothExpr::Neg(a) | SmoothExpr::Pow(a, _) => a.arity(),
            SmoothExpr::Add(a, b) | SmoothExpr::Sub(a, b) | SmoothExpr::Mul(a, b) | SmoothExpr::Div(a, b) => {
                let (x1, w1) = a.arity();
                let (x2, w2) = b.arity();
                (x1.max(x2), w1.max(w2))
            }
        }
    }

    /// Replaces every smooth variable `w_j` by `sub(j)`.
    pub fn substitute_smooth(&self, sub: &dyn Fn(usize) -> SmoothExpr) -> SmoothExpr {
        let go = |e: &SmoothExpr| Box::new(e.substitute_smooth(sub));
        match self {
            SmoothExpr::Var(Var::Smooth(j)) => sub(*j),
            SmoothExpr::Const(_) | SmoothExpr::Var(Var::Real(_)) => self.clone(),
            SmoothExpr::Neg(a) => SmoothExpr::Neg(go(a)),
            SmoothExpr::Pow(a, k) => SmoothExpr::Pow(go(a), *k),
            SmoothExpr::Add(a, b) => SmoothExpr::Add(go(a), go(b)),
            SmoothExpr::Sub(a, b) => SmoothExpr::Sub(go(a), go(b)),
            SmoothExpr::Mul(a, b) => SmoothExpr::Mul(go(a), go(b)),
            SmoothExpr::Div(a, b) => SmoothExpr::Div(go(a), go(b)),
        }
    }

    /// `prod w_j^{k_j}` over the nonzero exponents.
    pub fn smooth_monomial(powers: &[u64]) -> SmoothExpr {
        powers
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| {
                let v = SmoothExpr::Var(Var::Smooth(j));
                if k == 1 { v } else { SmoothExpr::Pow(Box::new(v), k as i64) }
            })
            .reduce(|a, b| SmoothExpr::Mul(Box::new(a), Box::new(b)))
            .unwrap_or_else(SmoothExpr::one)
    }

    pub fn eval<C: Coefficient>(&self, x: &[C], w: &[C]) -> Result<C> {
        Ok(match self {
            SmoothExpr::Const(c) => C::from_gaussian(c),
            SmoothExpr::Var(Var::Real(i)) => x
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Usage(format!("smooth factor uses x{} but the point has {} real coordinates", i + 1, x.len())))?,
            SmoothExpr::Var(Var::Smooth(j)) => w
                .get(*j)
                .cloned()
                .ok_or_else(|| Error::Usage(format!("smooth factor uses w{} but the model has {} smooth coordinates", j + 1, w.len())))?,
            SmoothExpr::Neg(a) => -a.eval(x, w)?,
            SmoothExpr::Add(a, b) => a.eval(x, w)? + b.eval(x, w)?,
            SmoothExpr::Sub(a, b) => a.eval(x, w)? - b.eval(x, w)?,
            SmoothExpr::Mul(a, b) => a.eval(x, w)? * b.eval(x, w)?,
            SmoothExpr::Div(a, b) => {
                let den = b.eval(x, w)?.inv().ok_or_else(|| Error::Domain("division by zero in smooth factor".into()))?;
                a.eval(x, w)? * den
            }
            SmoothExpr::Pow(a, k) => {
                let base = a.eval(x, w)?;
                let base = if *k < 0 {
                    base.inv().ok_or_else(|| Error::Domain("negative power of zero in smooth factor".into()))?
                } else {
                    base
                };
                (0..k.unsigned_abs()).fold(C::one(), |acc, _| acc * base.clone())
            }
        })
    }
}

impl fmt::Display for SmoothExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothExpr::Const(c) => {
                if c.im.is_zero() {
                    write!(f, "{}", format_rational(&c.re))
                } else {
                    write!(f, "({})", crate::semiring::format_gaussian(c))
                }
            }
            SmoothExpr::Var(Var::Real(i)) => write!(f, "x{}", i + 1),
            SmoothExpr::Var(Var::Smooth(j)) => write!(f, "w{}", j + 1),
            SmoothExpr::Neg(a) => write!(f, "-({a})"),
            SmoothExpr::Add(a, b) => write!(f, "({a} + {b})"),
            SmoothExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            SmoothExpr::Mul(a, b) => write!(f, "{a}*{b}"),
            SmoothExpr::Div(a, b) => write!(f, "{a}/({b})"),
            SmoothExpr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

impl Serialize for SmoothExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SmoothExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SmoothExpr::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational),
    I,
    Var(Var),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(parse_decimal(&text)?));
        } else if c == 'x' || c == 'w' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let idx: usize = chars[start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse(format!("variable {c} needs a 1-based index")))?;
            if idx == 0 {
                return Err(Error::Parse(format!("variable indices start at 1, got {c}0")));
            }
            out.push(Token::Var(if c == 'x' { Var::Real(idx - 1) } else { Var::Smooth(idx - 1) }));
        } else if c == 'i' {
            out.push(Token::I);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in smooth factor")));
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed number {text:?}"));
    match text.split_once('.') {
        None => text.parse::<num_bigint::BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((int, frac)) => {
            if frac.contains('.') || frac.is_empty() {
                return Err(bad());
            }
            let digits: num_bigint::BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let scale = num_bigint::BigInt::from(10).pow(frac.len() as u32);
            Ok(Rational::new(digits, scale))
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<SmoothExpr> {
        let mut acc = if self.eat('-') { SmoothExpr::Neg(Box::new(self.product()?)) } else { self.product()? };
        loop {
            if self.eat('+') {
                acc = SmoothExpr::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat('-') {
                acc = SmoothExpr::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<SmoothExpr> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = SmoothExpr::Mul(Box::new(acc), Box::new(self.power()?));
            } else if self.eat('/') {
                acc = SmoothExpr::Div(Box::new(acc), Box::new(self.power()?));
            } else if matches!(self.peek(), Some(Token::Num(_) | Token::Var(_) | Token::I | Token::Op('('))) {
                acc = SmoothExpr::Mul(Box::new(acc), Box::new(self.power()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<SmoothExpr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let paren = !neg && self.eat('(');
        let neg = neg || (paren && self.eat('-'));
        let k = match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(q)) if q.is_integer() => {
                self.pos += 1;
                i64::try_from(q.to_integer()).map_err(|_| Error::Parse("exponent too large".into()))?
            }
            _ => return Err(Error::Parse("powers in smooth factors must be integers".into())),
        };
        if paren && !self.eat(')') {
            return Err(Error::Parse("missing ')' after exponent".into()));
        }
        Ok(SmoothExpr::Pow(Box::new(base), if neg { -k } else { k }))
    }

    fn atom(&mut self) -> Result<SmoothExpr> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Token::Num(q)) => Ok(SmoothExpr::Const(GaussianRational::new(q, Rational::zero()))),
            Some(Token::I) => Ok(SmoothExpr::Const(GaussianRational::new(Rational::zero(), Rational::from_integer(1.into())))),
            Some(Token::Var(v)) => Ok(SmoothExpr::Var(v)),
            Some(Token::Op('(')) => {
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')' in smooth factor".into()));
                }
                Ok(e)
            }
            Some(Token::Op('-')) => Ok(SmoothExpr::Neg(Box::new(self.power()?))),
            other => Err(Error::Parse(format!("unexpected {other:?} in smooth factor"))),
        }
    }
}
