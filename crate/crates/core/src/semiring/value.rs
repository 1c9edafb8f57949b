use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_gaussian, parse_gaussian, Backend, Coefficient, Exploded, GaussianRational};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// An exploded number whose backend is chosen at run time.
///
/// JSON form: `{"c": "3/2-i", "e": "1/2"}` for the exact backend and
/// `{"c": [1.5, -1.0], "e": "1/2"}` for the double-precision backend.
/// Combining values of different backends is an error, never a conversion.
#[derive(Clone, Debug, PartialEq)]
pub enum ExplodedValue {
    Exact(Exploded<GaussianRational>),
    Float(Exploded<Complex64>),
}

impl ExplodedValue {
    pub fn backend(&self) -> Backend {
        match self {
            ExplodedValue::Exact(_) => Backend::Exact,
            ExplodedValue::Float(_) => Backend::Float,
        }
    }

    pub fn exponent(&self) -> &Rational {
        match self {
            ExplodedValue::Exact(x) => &x.exponent,
            ExplodedValue::Float(x) => &x.exponent,
        }
    }

    pub fn coeff_complex64(&self) -> Complex64 {
        match self {
            ExplodedValue::Exact(x) => x.coeff.to_complex64(),
            ExplodedValue::Float(x) => x.coeff,
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            ExplodedValue::Exact(x) => x.is_unit(),
            ExplodedValue::Float(x) => x.is_unit(),
        }
    }

    fn mismatch(op: &str) -> Error {
        Error::BackendMismatch(format!("cannot {op} an exact and a float exploded number"))
    }

    pub fn try_add(&self, other: &ExplodedValue) -> Result<ExplodedValue> {
        match (self, other) {
            (ExplodedValue::Exact(a), ExplodedValue::Exact(b)) => Ok(ExplodedValue::Exact(a + b)),
            (ExplodedValue::Float(a), ExplodedValue::Float(b)) => Ok(ExplodedValue::Float(a + b)),
            _ => Err(Self::mismatch("add")),
        }
    }

    pub fn try_mul(&self, other: &ExplodedValue) -> Result<ExplodedValue> {
        match (self, other) {
            (ExplodedValue::Exact(a), ExplodedValue::Exact(b)) => Ok(ExplodedValue::Exact(a * b)),
            (ExplodedValue::Float(a), ExplodedValue::Float(b)) => Ok(ExplodedValue::Float(a * b)),
            _ => Err(Self::mismatch("multiply")),
        }
    }

    /// `1 t^0` in the given backend.
    pub fn one(backend: Backend) -> ExplodedValue {
        match backend {
            Backend::Exact => ExplodedValue::Exact(Exploded::one()),
            Backend::Float => ExplodedValue::Float(Exploded::one()),
        }
    }

    pub fn pow(&self, k: i64) -> Result<ExplodedValue> {
        Ok(match self {
            ExplodedValue::Exact(a) => ExplodedValue::Exact(a.pow(k)?),
            ExplodedValue::Float(a) => ExplodedValue::Float(a.pow(k)?),
        })
    }

    pub fn negate(&self) -> ExplodedValue {
        match self {
            ExplodedValue::Exact(a) => ExplodedValue::Exact(a.map_coeff(|c| -c.clone())),
            ExplodedValue::Float(a) => ExplodedValue::Float(a.map_coeff(|c| -*c)),
        }
    }

    pub fn as_exact(&self) -> Result<&Exploded<GaussianRational>> {
        match self {
            ExplodedValue::Exact(x) => Ok(x),
            ExplodedValue::Float(_) => Err(Error::BackendMismatch(
                "an exact exploded number is required here".into(),
            )),
        }
    }

    pub fn as_float(&self) -> Result<&Exploded<Complex64>> {
        match self {
            ExplodedValue::Float(x) => Ok(x),
            ExplodedValue::Exact(_) => Err(Error::BackendMismatch(
                "a float exploded number is required here".into(),
            )),
        }
    }
}

impl From<Exploded<GaussianRational>> for ExplodedValue {
    fn from(x: Exploded<GaussianRational>) -> Self {
        ExplodedValue::Exact(x)
    }
}

impl From<Exploded<Complex64>> for ExplodedValue {
    fn from(x: Exploded<Complex64>) -> Self {
        ExplodedValue::Float(x)
    }
}

impl fmt::Display for ExplodedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExplodedValue::Exact(x) => x.fmt(f),
            ExplodedValue::Float(x) => x.fmt(f),
        }
    }
}

/// A bare coefficient tagged with its backend, e.g. a smooth coordinate.
///
/// JSON form: a Gaussian-rational string or a `[re, im]` pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussianRational),
    Float(Complex64),
}

impl Scalar {
    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => c.to_complex64(),
            Scalar::Float(c) => *c,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Float(c) => Coefficient::is_zero(c),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(c) => f.write_str(&format_gaussian(c)),
            Scalar::Float(c) => write!(f, "{}{:+}i", c.re, c.im),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(c) => CoeffRepr::Exact(format_gaussian(c)),
            Scalar::Float(c) => CoeffRepr::Float([c.re, c.im]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        Ok(match CoeffRepr::deserialize(d)? {
            CoeffRepr::Exact(s) => Scalar::Exact(parse_gaussian(&s).map_err(D::Error::custom)?),
            CoeffRepr::Float([re, im]) => Scalar::Float(Complex64::new(re, im)),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Exact(String),
    Float([f64; 2]),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueRepr {
    c: CoeffRepr,
    e: ExponentRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentRepr {
    Text(String),
    Int(i64),
}

impl Serialize for ExplodedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (c, e) = match self {
            ExplodedValue::Exact(x) => (CoeffRepr::Exact(format_gaussian(&x.coeff)), &x.exponent),
            ExplodedValue::Float(x) => (CoeffRepr::Float([x.coeff.re, x.coeff.im]), &x.exponent),
        };
        ValueRepr { c, e: ExponentRepr::Text(format_rational(e)) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExplodedValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ValueRepr::deserialize(d)?;
        let e = match repr.e {
            ExponentRepr::Text(s) => parse_rational(&s).map_err(D::Error::custom)?,
            ExponentRepr::Int(n) => crate::rational::rat(n),
        };
        Ok(match repr.c {
            CoeffRepr::Exact(s) => {
                ExplodedValue::Exact(Exploded::new(parse_gaussian(&s).map_err(D::Error::custom)?, e))
            }
            CoeffRepr::Float([re, im]) => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom("non-finite coefficient"));
                }
                ExplodedValue::Float(Exploded::new(Complex64::new(re, im), e))
            }
        })
    }
}
