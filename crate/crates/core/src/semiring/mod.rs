//! Tropical semiring `t^R`, exploded semiring `R t^R` and the positive
//! sub-semiring, with the homomorphisms between them.
//!
//! Addition in the exploded semiring keeps the term of smallest exponent and
//! adds coefficients on ties; multiplication multiplies coefficients and adds
//! exponents. `t` is thought of as infinitesimally small and positive, so the
//! order on tropical numbers is reversed against exponents.

mod coefficient;
mod expr;
mod value;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, serde_rational, Rational};

pub use coefficient::{format_gaussian, parse_gaussian, Backend, Coefficient, GaussianRational};
pub use expr::parse_expression;
pub use value::{ExplodedValue, Scalar};

/// An element `t^x` of the tropical semiring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tropical {
    #[serde(with = "serde_rational")]
    pub exponent: Rational,
}

impl Tropical {
    pub fn new(exponent: Rational) -> Self {
        Tropical { exponent }
    }

    /// The multiplicative identity `t^0`.
    pub fn one() -> Self {
        Tropical::new(Rational::zero())
    }
}

impl Add for Tropical {
    type Output = Tropical;
    fn add(self, rhs: Tropical) -> Tropical {
        if rhs.exponent < self.exponent {
            rhs
        } else {
            self
        }
    }
}

impl Mul for Tropical {
    type Output = Tropical;
    fn mul(self, rhs: Tropical) -> Tropical {
        Tropical::new(self.exponent + rhs.exponent)
    }
}

impl<'a> Add<&'a Tropical> for &'a Tropical {
    type Output = Tropical;
    fn add(self, rhs: &Tropical) -> Tropical {
        self.clone() + rhs.clone()
    }
}

impl<'a> Mul<&'a Tropical> for &'a Tropical {
    type Output = Tropical;
    fn mul(self, rhs: &Tropical) -> Tropical {
        Tropical::new(&self.exponent + &rhs.exponent)
    }
}

// t^x > t^y iff x < y.
impl Ord for Tropical {
    fn cmp(&self, other: &Self) -> Ordering {
        other.exponent.cmp(&self.exponent)
    }
}

impl PartialOrd for Tropical {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}", format_rational(&self.exponent))
    }
}

/// An element `c t^x` of the exploded semiring over the coefficient ring `C`.
///
/// A zero coefficient is allowed here; values of exploded functions must use
/// [`Exploded::unit`], which rejects it.
#[derive(Clone, Debug, PartialEq)]
pub struct Exploded<C> {
    pub coeff: C,
    pub exponent: Rational,
}

impl<C: Coefficient> Exploded<C> {
    pub fn new(coeff: C, exponent: Rational) -> Self {
        Exploded { coeff, exponent }
    }

    /// Constructs an element of `C* t^R`.
    pub fn unit(coeff: C, exponent: Rational) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::Domain(
                "exploded function values need a nonzero coefficient".into(),
            ));
        }
        Ok(Exploded { coeff, exponent })
    }

    /// `iota(c) = c t^0`.
    pub fn iota(coeff: C) -> Self {
        Exploded::new(coeff, Rational::zero())
    }

    pub fn one() -> Self {
        Exploded::iota(C::one())
    }

    /// `1 t^x`.
    pub fn t_power(exponent: Rational) -> Self {
        Exploded::new(C::one(), exponent)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeff.is_zero()
    }

    pub fn tropical_part(&self) -> Tropical {
        Tropical::new(self.exponent.clone())
    }

    /// The smooth part, defined on the positive sub-semiring: the coefficient
    /// when the exponent is zero and zero when it is positive.
    pub fn smooth_part(&self) -> Result<C> {
        if self.exponent.is_negative() {
            return Err(Error::Domain(format!(
                "smooth part is undefined for negative exponent {}",
                format_rational(&self.exponent)
            )));
        }
        if self.exponent.is_zero() {
            Ok(self.coeff.clone())
        } else {
            Ok(C::zero())
        }
    }

    pub fn is_positive_semiring(&self) -> bool {
        !self.exponent.is_negative()
    }

    /// Integer power; negative powers need a nonzero coefficient.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 {
            let inv = self.coeff.inv().ok_or_else(|| {
                Error::Domain("negative power of an element with zero coefficient".into())
            })?;
            Exploded::new(inv, -self.exponent.clone())
        } else {
            self.clone()
        };
        let mut acc = Exploded::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn map_coeff<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Exploded<D> {
        Exploded::new(f(&self.coeff), self.exponent.clone())
    }
}

impl<C: Coefficient> Add for Exploded<C> {
    type Output = Exploded<C>;
    fn add(self, rhs: Exploded<C>) -> Exploded<C> {
        match self.exponent.cmp(&rhs.exponent) {
            Ordering::Less => self,
            Ordering::Greater => rhs,
            Ordering::Equal => Exploded::new(self.coeff + rhs.coeff, self.exponent),
        }
    }
}

impl<C: Coefficient> Mul for Exploded<C> {
    type Output = Exploded<C>;
    fn mul(self, rhs: Exploded<C>) -> Exploded<C> {
        Exploded::new(self.coeff * rhs.coeff, self.exponent + rhs.exponent)
    }
}

impl<'a, C: Coefficient> Add<&'a Exploded<C>> for &'a Exploded<C> {
    type Output = Exploded<C>;
    fn add(self, rhs: &Exploded<C>) -> Exploded<C> {
        self.clone() + rhs.clone()
    }
}

impl<'a, C: Coefficient> Mul<&'a Exploded<C>> for &'a Exploded<C> {
    type Output = Exploded<C>;
    fn mul(self, rhs: &Exploded<C>) -> Exploded<C> {
        Exploded::new(
            self.coeff.clone() * rhs.coeff.clone(),
            &self.exponent + &rhs.exponent,
        )
    }
}

impl<C: Coefficient> fmt::Display for Exploded<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}t^{}", self.coeff.display_factor(), format_rational(&self.exponent))
    }
}

/// An element `x t^y` of `(0, oo) t^R` with the order
/// `x1 t^y1 < x2 t^y2` iff `y1 > y2`, or `y1 = y2` and `x1 < x2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveExploded {
    #[serde(with = "serde_rational")]
    coeff: Rational,
    #[serde(with = "serde_rational")]
    exponent: Rational,
}

impl PositiveExploded {
    pub fn new(coeff: Rational, exponent: Rational) -> Result<Self> {
        if !coeff.is_positive() {
            return Err(Error::Domain(format!(
                "positive exploded numbers need a positive coefficient, got {}",
                format_rational(&coeff)
            )));
        }
        Ok(PositiveExploded { coeff, exponent })
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    /// Scaling by another positive element; preserves the order.
    pub fn scale(&self, by: &PositiveExploded) -> PositiveExploded {
        PositiveExploded {
            coeff: &self.coeff * &by.coeff,
            exponent: &self.exponent + &by.exponent,
        }
    }
}

impl Ord for PositiveExploded {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .exponent
            .cmp(&self.exponent)
            .then_with(|| self.coeff.cmp(&other.coeff))
    }
}

impl PartialOrd for PositiveExploded {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare_positive(a: &PositiveExploded, b: &PositiveExploded) -> Ordering {
    a.cmp(b)
}

/// Monomial `prod z_i^{alpha_i}` of exploded values.
pub fn monomial<C: Coefficient>(z: &[Exploded<C>], alpha: &[i64]) -> Result<Exploded<C>> {
    if z.len() != alpha.len() {
        return Err(Error::Usage(format!(
            "monomial exponent has length {}, point has {} coordinates",
            alpha.len(),
            z.len()
        )));
    }
    z.iter()
        .zip(alpha)
        .try_fold(Exploded::one(), |acc, (zi, &k)| Ok(acc * zi.pow(k)?))
}

/// Integer-valued exponent helper used by lattice code.
pub fn int_exponent(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
