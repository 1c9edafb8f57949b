use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::{DeltaOperator, ZeroMask};
use crate::coordmodel::{SmoothExpr, Var};
use crate::error::{Error, Result};
use crate::semiring::{format_gaussian, Coefficient, GaussianRational};

/// Polynomial in the smooth coordinates `w_1..w_k` with Gaussian-rational
/// coefficients, keyed by exponent vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothPolynomial {
    k: usize,
    terms: BTreeMap<Vec<u64>, GaussianRational>,
}

impl SmoothPolynomial {
    pub fn zero(k: usize) -> Self {
        SmoothPolynomial { k, terms: BTreeMap::new() }
    }

    pub fn constant(k: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(k);
        p.add_term(vec![0; k], c);
        p
    }

    pub fn monomial(powers: Vec<u64>) -> Self {
        let mut p = Self::zero(powers.len());
        p.add_term(powers, GaussianRational::one());
        p
    }

    pub fn parse(src: &str, k: usize) -> Result<Self> {
        Self::from_expr(&SmoothExpr::parse(src)?, k)
    }

    pub fn from_expr(e: &SmoothExpr, k: usize) -> Result<Self> {
        Ok(match e {
            SmoothExpr::Const(c) => Self::constant(k, c.clone()),
            SmoothExpr::Var(Var::Smooth(j)) => {
                if *j >= k {
                    return Err(Error::Usage(format!("w{} used but the model has {k} smooth coordinates", j + 1)));
                }
                let mut p = vec![0; k];
                p[*j] = 1;
                Self::monomial(p)
            }
            SmoothExpr::Var(Var::Real(i)) => {
                return Err(Error::Usage(format!("x{} is not a smooth coordinate", i + 1)));
            }
            SmoothExpr::Neg(a) => Self::from_expr(a, k)?.scale(&-GaussianRational::one()),
            SmoothExpr::Add(a, b) => Self::from_expr(a, k)?.add(&Self::from_expr(b, k)?),
            SmoothExpr::Sub(a, b) => Self::from_expr(a, k)?.add(&Self::from_expr(b, k)?.scale(&-GaussianRational::one())),
            SmoothExpr::Mul(a, b) => Self::from_expr(a, k)?.mul(&Self::from_expr(b, k)?),
            SmoothExpr::Div(a, b) => {
                let den = Self::from_expr(b, k)?;
                let c = den
                    .as_constant()
                    .and_then(|c| Coefficient::inv(&c))
                    .ok_or_else(|| Error::Usage("only division by a nonzero constant is polynomial".into()))?;
                Self::from_expr(a, k)?.scale(&c)
            }
            SmoothExpr::Pow(a, n) => {
                if *n < 0 {
                    return Err(Error::Usage("negative powers are not polynomial".into()));
                }
                let base = Self::from_expr(a, k)?;
                (0..*n).fold(Self::constant(k, GaussianRational::one()), |acc, _| acc.mul(&base))
            }
        })
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u64>, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&vec![0; self.k]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, powers: Vec<u64>, c: GaussianRational) {
        let entry = self.terms.entry(powers).or_insert_with(GaussianRational::zero);
        *entry = entry.clone() + c;
        let zero: Vec<Vec<u64>> = self.terms.iter().filter(|(_, c)| Coefficient::is_zero(*c)).map(|(p, _)| p.clone()).collect();
        for p in zero {
            self.terms.remove(&p);
        }
    }

    fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.k);
        for (p, d) in &self.terms {
            out.add_term(p.clone(), d.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.k);
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                let r = p.iter().zip(q).map(|(a, b)| a + b).collect();
                out.add_term(r, c.clone() * d.clone());
            }
        }
        out
    }

    /// `e_S`: sets the masked coordinates to zero.
    pub fn project(&self, mask: &ZeroMask) -> Self {
        let mut out = Self::zero(self.k);
        for (p, c) in &self.terms {
            if mask.keeps(p) {
                out.add_term(p.clone(), c.clone());
            }
        }
        out
    }

    pub fn apply(&self, op: &DeltaOperator) -> Self {
        op.terms.iter().fold(Self::zero(self.k), |acc, (sign, mask)| {
            acc.add(&self.project(mask).scale(&GaussianRational::from(crate::rational::rat(*sign as i64))))
        })
    }

    pub fn eval(&self, w: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(p, c)| p.iter().zip(w).fold(c.to_complex64(), |acc, (&k, z)| acc * z.powu(k as u32)))
            .sum()
    }

    pub fn to_expr(&self) -> SmoothExpr {
        self.terms
            .iter()
            .rev()
            .map(|(p, c)| {
                let m = SmoothExpr::smooth_monomial(p);
                if *c == GaussianRational::one() {
                    m
                } else if p.iter().all(|&k| k == 0) {
                    SmoothExpr::Const(c.clone())
                } else {
                    SmoothExpr::Mul(Box::new(SmoothExpr::Const(c.clone())), Box::new(m))
                }
            })
            .reduce(|a, b| SmoothExpr::Add(Box::new(a), Box::new(b)))
            .unwrap_or_else(|| SmoothExpr::Const(GaussianRational::zero()))
    }
}

impl fmt::Display for SmoothPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let mono = SmoothExpr::smooth_monomial(p);
            let constant = p.iter().all(|&k| k == 0);
            let mut text = format_gaussian(c);
            let negative = text.starts_with('-') && !text[1..].contains(['+', '-']);
            if negative {
                text.remove(0);
            }
            if text.contains(['+', '-']) {
                text = format!("({text})");
            }
            let body = match (constant, text.as_str()) {
                (true, _) => text,
                (false, "1") => mono.to_string(),
                (false, _) => format!("{text}*{mono}"),
            };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}

impl Serialize for SmoothPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
