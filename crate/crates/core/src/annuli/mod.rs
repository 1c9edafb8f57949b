//! Exploded annuli: conformal moduli, gluing parameters `z+ z- = Q`, the
//! cutting and gluing maps, and fitting of cylinder model maps.

mod cutoff;
mod cylinder;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, serde_rational, Rational};
use crate::semiring::ExplodedValue;

pub use cutoff::{cut, glue, AnnulusSamples, CutoffPair, GluingSamples};
pub use cylinder::{fit_cylinder_model, CylinderModel, CylinderSamples};

/// Modulus `log x t^{-l}`: `s` when `l = 0`, infinite type of tropical length
/// `l` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConformalModulus {
    Finite {
        #[serde(with = "serde_rational")]
        l: Rational,
        s: f64,
    },
    SemiInfinite,
}

impl ConformalModulus {
    pub fn finite(l: Rational, s: f64) -> Result<Self> {
        if l.is_negative() {
            return Err(Error::Domain(format!("tropical length {} is negative", format_rational(&l))));
        }
        if !s.is_finite() {
            return Err(Error::Domain(format!("log part {s} is not finite")));
        }
        if l.is_zero() && s <= 0.0 {
            return Err(Error::Domain(format!("an annulus of tropical length 0 needs a positive log part, got {s}")));
        }
        Ok(ConformalModulus::Finite { l, s })
    }

    /// The round annulus `{inner < |z| < outer}`.
    pub fn round(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) {
            return Err(Error::Domain(format!("need 0 < inner < outer, got {inner} and {outer}")));
        }
        Self::finite(Rational::zero(), (outer / inner).ln())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConformalModulus::Finite { l, s } => Self::finite(l.clone(), *s).map(|_| ()),
            ConformalModulus::SemiInfinite => Ok(()),
        }
    }
}

impl fmt::Display for ConformalModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConformalModulus::Finite { l, s } => write!(f, "({}, {s})", format_rational(l)),
            ConformalModulus::SemiInfinite => f.write_str("semi-infinite"),
        }
    }
}

/// Concatenation of nested annuli. A semi-infinite operand absorbs the other.
pub fn concat(a: &ConformalModulus, b: &ConformalModulus) -> ConformalModulus {
    match (a, b) {
        (ConformalModulus::Finite { l: l1, s: s1 }, ConformalModulus::Finite { l: l2, s: s2 }) => {
            ConformalModulus::Finite { l: l1 + l2, s: s1 + s2 }
        }
        _ => ConformalModulus::SemiInfinite,
    }
}

/// `Q = e^{log_abs + i arg} t^{exponent}`, kept in log-polar form so that
/// parameters such as `e^{-800}` stay representable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingParameter {
    pub log_abs: f64,
    pub arg: f64,
    #[serde(with = "serde_rational")]
    pub exponent: Rational,
}

impl GluingParameter {
    pub fn new(log_abs: f64, arg: f64, exponent: Rational) -> Result<Self> {
        if !log_abs.is_finite() || !arg.is_finite() {
            return Err(Error::Domain("gluing parameter must be finite and nonzero".into()));
        }
        if exponent.is_negative() {
            return Err(Error::Domain(format!("gluing parameter has negative exponent {}", format_rational(&exponent))));
        }
        if exponent.is_zero() && log_abs >= 0.0 {
            return Err(Error::Domain(format!("gluing parameter at exponent 0 needs |Q| < 1, got e^{log_abs}")));
        }
        Ok(GluingParameter { log_abs, arg, exponent })
    }

    pub fn from_value(q: &ExplodedValue) -> Result<Self> {
        let c = q.coeff_complex64();
        if c.norm() == 0.0 {
            return Err(Error::Domain("gluing parameter must be nonzero".into()));
        }
        Self::new(c.norm().ln(), c.arg(), q.exponent().clone())
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.log_abs, self.arg, self.exponent.clone()).map(|_| ())
    }
}

pub fn modulus_of_q(q: &GluingParameter) -> Result<ConformalModulus> {
    q.validate()?;
    Ok(ConformalModulus::Finite { l: q.exponent.clone(), s: -q.log_abs })
}
