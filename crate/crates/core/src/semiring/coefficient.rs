use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

/// Gaussian rational `a + b i` with exact rational parts.
pub type GaussianRational = Complex<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

/// Coefficient ring of an exploded number.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_rational(q: &Rational) -> Self;
    fn from_gaussian(z: &GaussianRational) -> Self;
    fn to_complex64(&self) -> Complex64;
    /// Text used when the coefficient is printed in front of `t^x`.
    fn display_factor(&self) -> String;
}

impl Coefficient for GaussianRational {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Complex::new(Rational::zero(), Rational::zero())
    }

    fn one() -> Self {
        Complex::new(Rational::one(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if Coefficient::is_zero(self) {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Complex::new(&self.re / &norm, -(&self.im / &norm)))
    }

    fn from_rational(q: &Rational) -> Self {
        Complex::new(q.clone(), Rational::zero())
    }

    fn from_gaussian(z: &GaussianRational) -> Self {
        z.clone()
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    fn display_factor(&self) -> String {
        let s = format_gaussian(self);
        if self.im.is_zero() {
            s
        } else {
            format!("({s})")
        }
    }
}

impl Coefficient for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn inv(&self) -> Option<Self> {
        if Coefficient::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(to_f64(q), 0.0)
    }

    fn from_gaussian(z: &GaussianRational) -> Self {
        Complex64::new(to_f64(&z.re), to_f64(&z.im))
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }

    fn display_factor(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else {
            format!("({}{:+}i)", self.re, self.im)
        }
    }
}

/// Formats `a`, `bi` or `a+bi` with fraction-string parts.
pub fn format_gaussian(z: &GaussianRational) -> String {
    let imag = |b: &Rational| -> String {
        if b.is_one() {
            "i".to_string()
        } else if (-b).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", format_rational(b))
        }
    };
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => format_rational(&z.re),
        (true, false) => imag(&z.im),
        (false, false) => {
            let im = imag(&z.im);
            if z.im.is_negative() {
                format!("{}{}", format_rational(&z.re), im)
            } else {
                format!("{}+{}", format_rational(&z.re), im)
            }
        }
    }
}

/// Parses the text produced by [`format_gaussian`].
pub fn parse_gaussian(s: &str) -> Result<GaussianRational> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a Gaussian rational: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::new(parse_rational(&t)?, Rational::zero()));
    };
    // Split at the last sign that is not the leading one.
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => parse_rational(other.trim_start_matches('+')).map_err(|_| bad())?,
    };
    let re = parse_rational(re).map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}
