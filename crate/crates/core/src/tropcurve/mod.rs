//! Tropical polynomials `min_alpha (y_alpha + alpha . a)`, their corner loci
//! and prevarieties.

mod locus;
mod prevariety;

pub use locus::{
    check_balancing, corner_locus, BalanceReport, BalancedGraph, DualCell, DualSubdivision, GraphEdge, GraphLine,
    GraphRay,
};
pub use prevariety::{prevariety, Prevariety, PrevarietyCell, MAX_PREVARIETY_DIM};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{dot_int, serde_rational, serde_rational_vec, Rational};
use crate::semiring::Tropical;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TropicalTerm {
    #[serde(with = "serde_rational")]
    pub y: Rational,
    pub alpha: Vec<i64>,
}

impl TropicalTerm {
    pub fn new(y: Rational, alpha: Vec<i64>) -> Self {
        TropicalTerm { y, alpha }
    }

    pub fn value_at(&self, a: &[Rational]) -> Rational {
        &self.y + dot_int(&self.alpha, a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr")]
pub struct TropicalPolynomial {
    pub n: usize,
    pub terms: Vec<TropicalTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyRepr {
    n: usize,
    terms: Vec<TropicalTerm>,
}

impl TryFrom<PolyRepr> for TropicalPolynomial {
    type Error = Error;
    fn try_from(r: PolyRepr) -> Result<Self> {
        TropicalPolynomial::new(r.n, r.terms)
    }
}

impl TropicalPolynomial {
    pub fn new(n: usize, terms: Vec<TropicalTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.alpha.len() != n) {
            return Err(Error::Validation(format!("term exponent {:?} does not have {n} entries", t.alpha)));
        }
        Ok(TropicalPolynomial { n, terms })
    }

    /// Convenience constructor from `(y, alpha)` pairs with integer `y`.
    pub fn from_ints(n: usize, terms: &[(i64, &[i64])]) -> Result<Self> {
        TropicalPolynomial::new(
            n,
            terms.iter().map(|(y, a)| TropicalTerm::new(Rational::from_integer((*y).into()), a.to_vec())).collect(),
        )
    }

    /// Duplicate exponents merged by keeping the smallest coefficient
    /// exponent; terms sorted by exponent.
    pub fn merged(&self) -> TropicalPolynomial {
        let mut best: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for t in &self.terms {
            best.entry(t.alpha.clone())
                .and_modify(|y| {
                    if t.y < *y {
                        *y = t.y.clone();
                    }
                })
                .or_insert_with(|| t.y.clone());
        }
        TropicalPolynomial { n: self.n, terms: best.into_iter().map(|(alpha, y)| TropicalTerm { y, alpha }).collect() }
    }

    /// Multiplies by the monomial `t^c z^beta`.
    pub fn shifted(&self, c: &Rational, beta: &[i64]) -> TropicalPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| TropicalTerm::new(&t.y + c, t.alpha.iter().zip(beta).map(|(a, b)| a + b).collect()))
            .collect();
        TropicalPolynomial { n: self.n, terms }
    }

    fn check_arity(&self, a: &[Rational]) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::Usage(format!("point has {} coordinates, polynomial has {} variables", a.len(), self.n)));
        }
        if self.terms.is_empty() {
            return Err(Error::Domain("polynomial has no terms".into()));
        }
        Ok(())
    }

    pub fn eval(&self, a: &[Rational]) -> Result<Tropical> {
        self.check_arity(a)?;
        let min = self.terms.iter().map(|t| t.value_at(a)).min().expect("nonempty");
        Ok(Tropical::new(min))
    }

    pub fn achieving_set(&self, a: &[Rational]) -> Result<AchievingSet> {
        let value = self.eval(a)?.exponent;
        let mut exponents: Vec<Vec<i64>> =
            self.terms.iter().filter(|t| t.value_at(a) == value).map(|t| t.alpha.clone()).collect();
        exponents.sort();
        exponents.dedup();
        Ok(AchievingSet { point: a.to_vec(), exponents, value })
    }
}

/// Exponents whose terms attain the minimum at `point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AchievingSet {
    #[serde(with = "serde_rational_vec")]
    pub point: Vec<Rational>,
    pub exponents: Vec<Vec<i64>>,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}
