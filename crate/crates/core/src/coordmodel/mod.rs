//! Coordinate models `R^n x t^m_A`: points, smooth and tropical parts,
//! exploded functions and monomial morphisms.

mod morphism;
mod smooth;

pub use morphism::{FiberMultiplicity, MonomialMorphism, RealAffine};
pub use smooth::{SmoothExpr, Var};

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{HilbertBasis, IntMatrix, IntegralCone};
use crate::rational::{dot_int, serde_rational, serde_rational_vec, Rational};
use crate::semiring::{Backend, Coefficient, Exploded, ExplodedValue, GaussianRational, Scalar};

/// `R^n x t^m_A` with the Hilbert basis of `A*` as smooth coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr")]
pub struct CoordModel {
    pub n: usize,
    pub cone: IntegralCone,
    pub dual_basis: HilbertBasis,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRepr {
    #[serde(default)]
    n: usize,
    cone: IntegralCone,
}

impl TryFrom<ModelRepr> for CoordModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        CoordModel::new(r.n, r.cone)
    }
}

impl CoordModel {
    pub fn new(n: usize, cone: IntegralCone) -> Result<Self> {
        let dual_basis = cone.dual_cone_hilbert_basis()?;
        Ok(CoordModel { n, cone, dual_basis })
    }

    /// `R^n x t^m_k`: the first `k` of `m` exploded coordinates are bounded.
    pub fn standard(n: usize, m: usize, k: usize) -> Result<Self> {
        CoordModel::new(n, IntegralCone::standard(m, k)?)
    }

    pub fn m(&self) -> usize {
        self.cone.m
    }

    pub fn check_point(&self, p: &CoordModelPoint) -> Result<()> {
        if p.x.len() != self.n || p.z.len() != self.m() {
            return Err(Error::Domain(format!(
                "point has {} real and {} exploded coordinates, model needs {} and {}",
                p.x.len(),
                p.z.len(),
                self.n,
                self.m()
            )));
        }
        if p.z.iter().any(|z| !z.is_unit()) {
            return Err(Error::Domain("exploded coordinates need nonzero coefficients".into()));
        }
        let a = p.tropical();
        if !self.cone.contains(&a) {
            return Err(Error::Domain("tropical part of the point is outside the cone".into()));
        }
        p.backend()?;
        Ok(())
    }

    pub fn point_parts(&self, p: &CoordModelPoint) -> Result<PointParts> {
        self.check_point(p)?;
        let gens = &self.dual_basis.generators;
        let smooth = match p.typed()? {
            Typed::Exact(z) => smooth_coords(gens, &z)?.into_iter().map(Scalar::Exact).collect(),
            Typed::Float(z) => smooth_coords(gens, &z)?.into_iter().map(Scalar::Float).collect(),
        };
        Ok(PointParts { x: p.x.clone(), smooth, tropical: p.tropical(), generators: gens.clone() })
    }

    /// Integral vectors: `v` with `v(f)/f` integral for every exploded
    /// coordinate monomial. The pairing with `Z^m` makes this the standard
    /// lattice; the real factor contributes nothing.
    pub fn integral_tangent_basis(&self) -> IntegralTangent {
        let m = self.m();
        IntegralTangent { rank: m, basis: IntMatrix::identity(m) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralTangent {
    pub rank: usize,
    pub basis: IntMatrix,
}

/// `(x, z_1, ..., z_m)` with `z_i` exploded numbers of one backend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordModelPoint {
    #[serde(default, with = "serde_rational_vec")]
    pub x: Vec<Rational>,
    pub z: Vec<ExplodedValue>,
}

pub(crate) enum Typed {
    Exact(Vec<Exploded<GaussianRational>>),
    Float(Vec<Exploded<Complex64>>),
}

impl CoordModelPoint {
    pub fn new(x: Vec<Rational>, z: Vec<ExplodedValue>) -> Self {
        CoordModelPoint { x, z }
    }

    pub fn tropical(&self) -> Vec<Rational> {
        self.z.iter().map(|z| z.exponent().clone()).collect()
    }

    /// The common backend; exact when there are no exploded coordinates.
    pub fn backend(&self) -> Result<Backend> {
        let b = self.z.first().map_or(Backend::Exact, ExplodedValue::backend);
        if self.z.iter().any(|z| z.backend() != b) {
            return Err(Error::BackendMismatch("point mixes exact and float coordinates".into()));
        }
        Ok(b)
    }

    pub(crate) fn typed(&self) -> Result<Typed> {
        Ok(match self.backend()? {
            Backend::Exact => Typed::Exact(self.z.iter().map(|z| z.as_exact().cloned()).collect::<Result<_>>()?),
            Backend::Float => Typed::Float(self.z.iter().map(|z| z.as_float().cloned()).collect::<Result<_>>()?),
        })
    }
}

fn smooth_coords<C: Coefficient>(gens: &[Vec<i64>], z: &[Exploded<C>]) -> Result<Vec<C>> {
    let a: Vec<Rational> = z.iter().map(|zi| zi.exponent.clone()).collect();
    gens.iter()
        .map(|alpha| {
            let e = dot_int(alpha, &a);
            if e.is_negative() {
                Err(Error::Domain("point is outside the cone dual to the coordinates".into()))
            } else if e.is_zero() {
                Ok(coefficient_monomial(z, alpha)?)
            } else {
                Ok(C::zero())
            }
        })
        .collect()
}

fn coefficient_monomial<C: Coefficient>(z: &[Exploded<C>], alpha: &[i64]) -> Result<C> {
    z.iter().zip(alpha).try_fold(C::one(), |acc, (zi, &k)| {
        let base = if k < 0 {
            zi.coeff.inv().ok_or_else(|| Error::Domain("negative power of a zero coefficient".into()))?
        } else {
            zi.coeff.clone()
        };
        Ok((0..k.unsigned_abs()).fold(acc, |p, _| p * base.clone()))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointParts {
    #[serde(with = "serde_rational_vec")]
    pub x: Vec<Rational>,
    /// Smooth coordinate for each dual generator, in generator order.
    pub smooth: Vec<Scalar>,
    #[serde(with = "serde_rational_vec")]
    pub tropical: Vec<Rational>,
    pub generators: Vec<Vec<i64>>,
}

/// `h(x, z) = f(smooth part) * t^y * z^alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplodedMonomialFunction {
    #[serde(default = "SmoothExpr::one")]
    pub smooth: SmoothExpr,
    #[serde(default, with = "serde_rational")]
    pub y: Rational,
    pub alpha: Vec<i64>,
}

impl ExplodedMonomialFunction {
    pub fn new(smooth: SmoothExpr, y: Rational, alpha: Vec<i64>) -> Self {
        ExplodedMonomialFunction { smooth, y, alpha }
    }

    pub fn eval(&self, model: &CoordModel, p: &CoordModelPoint) -> Result<ExplodedValue> {
        model.check_point(p)?;
        if self.alpha.len() != model.m() {
            return Err(Error::Usage(format!("monomial has {} exponents, model has m = {}", self.alpha.len(), model.m())));
        }
        let gens = &model.dual_basis.generators;
        Ok(match p.typed()? {
            Typed::Exact(z) => ExplodedValue::Exact(self.eval_typed(gens, &p.x, &z)?),
            Typed::Float(z) => ExplodedValue::Float(self.eval_typed(gens, &p.x, &z)?),
        })
    }

    fn eval_typed<C: Coefficient>(&self, gens: &[Vec<i64>], x: &[Rational], z: &[Exploded<C>]) -> Result<Exploded<C>> {
        let w = smooth_coords(gens, z)?;
        let xs: Vec<C> = x.iter().map(C::from_rational).collect();
        let f = self.smooth.eval(&xs, &w)?;
        if f.is_zero() {
            return Err(Error::Domain("smooth factor vanishes at this point, value is not in C* t^R".into()));
        }
        let mono = crate::semiring::monomial(z, &self.alpha)?;
        Ok(Exploded::iota(f) * Exploded::t_power(self.y.clone()) * mono)
    }
}

/// Evaluates an exploded monomial function at a point of a model.
pub fn eval_function(h: &ExplodedMonomialFunction, model: &CoordModel, p: &CoordModelPoint) -> Result<ExplodedValue> {
    h.eval(model, p)
}
