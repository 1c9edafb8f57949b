//! Monomial morphisms `z -> (c_j z^{alpha^j})_j` and their lattice invariants.

use serde::{Deserialize, Serialize};

use super::CoordModelPoint;
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, DualCone, IntMatrix, IntegralCone};
use crate::polyhedron::rank;
use crate::rational::{dot_int, rat, serde_rational_matrix, serde_rational_vec, Rational};
use crate::semiring::{Backend, ExplodedValue};

/// `x -> M x + b` on the real factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealAffine {
    #[serde(with = "serde_rational_matrix")]
    pub matrix: Vec<Vec<Rational>>,
    #[serde(default, with = "serde_rational_vec")]
    pub offset: Vec<Rational>,
}

impl RealAffine {
    fn offset_or_zero(&self) -> Vec<Rational> {
        if self.offset.is_empty() {
            vec![rat(0); self.matrix.len()]
        } else {
            self.offset.clone()
        }
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if self.matrix.iter().any(|r| r.len() != x.len()) {
            return Err(Error::Usage(format!("real part expects {} coordinates", self.matrix.first().map_or(0, Vec::len))));
        }
        Ok(self
            .matrix
            .iter()
            .zip(self.offset_or_zero())
            .map(|(row, b)| row.iter().zip(x).fold(b, |acc, (m, xi)| acc + m * xi))
            .collect())
    }

    fn compose(&self, inner: &RealAffine) -> RealAffine {
        let k = inner.matrix.first().map_or(0, Vec::len);
        let matrix = self
            .matrix
            .iter()
            .map(|row| (0..k).map(|j| row.iter().zip(&inner.matrix).fold(rat(0), |acc, (a, r)| acc + a * &r[j])).collect())
            .collect();
        let inner_b = inner.offset_or_zero();
        let offset = self
            .matrix
            .iter()
            .zip(self.offset_or_zero())
            .map(|(row, b)| row.iter().zip(&inner_b).fold(b, |acc, (a, c)| acc + a * c))
            .collect();
        RealAffine { matrix, offset }
    }
}

/// A monomial morphism. `consts` defaults to `1 t^0` for every target
/// coordinate, and a missing real part means the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialMorphism {
    pub alpha: IntMatrix,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub consts: Vec<ExplodedValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<RealAffine>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberMultiplicity {
    pub multiplicity: i64,
    pub kernel_cone: IntegralCone,
}

impl MonomialMorphism {
    pub fn new(alpha: IntMatrix, consts: Vec<ExplodedValue>, real: Option<RealAffine>) -> Result<Self> {
        let f = MonomialMorphism { alpha, consts, real };
        f.validate()?;
        Ok(f)
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        MonomialMorphism::new(IntMatrix::from_rows(rows)?, Vec::new(), None)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.consts.is_empty() && self.consts.len() != self.alpha.nrows() {
            return Err(Error::Validation(format!("{} constants for {} target coordinates", self.consts.len(), self.alpha.nrows())));
        }
        if self.consts.iter().any(|c| !c.is_unit()) {
            return Err(Error::Validation("morphism constants need nonzero coefficients".into()));
        }
        if let Some(r) = &self.real {
            if !r.offset.is_empty() && r.offset.len() != r.matrix.len() {
                return Err(Error::Validation("real offset and matrix disagree in size".into()));
            }
        }
        Ok(())
    }

    pub fn source_dim(&self) -> usize {
        self.alpha.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.alpha.nrows()
    }

    fn consts_or_one(&self, backend: Backend) -> Vec<ExplodedValue> {
        if self.consts.is_empty() {
            vec![ExplodedValue::one(backend); self.target_dim()]
        } else {
            self.consts.clone()
        }
    }

    fn const_exponents(&self) -> Vec<Rational> {
        if self.consts.is_empty() {
            vec![rat(0); self.target_dim()]
        } else {
            self.consts.iter().map(|c| c.exponent().clone()).collect()
        }
    }

    pub fn apply(&self, p: &CoordModelPoint) -> Result<CoordModelPoint> {
        if p.z.len() != self.source_dim() && self.target_dim() > 0 {
            return Err(Error::Usage(format!("morphism expects {} exploded coordinates, got {}", self.source_dim(), p.z.len())));
        }
        let backend = p.backend()?;
        let z = self
            .consts_or_one(backend)
            .iter()
            .zip(self.alpha.rows())
            .map(|(c, row)| {
                p.z.iter().zip(row).try_fold(c.clone(), |acc, (zi, &k)| acc.try_mul(&zi.pow(k)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let x = match &self.real {
            Some(r) => r.apply(&p.x)?,
            None => p.x.clone(),
        };
        Ok(CoordModelPoint::new(x, z))
    }

    /// `alpha a + exponents(consts)`.
    pub fn tropical_image(&self, a: &[Rational]) -> Vec<Rational> {
        self.alpha.rows().iter().zip(self.const_exponents()).map(|(row, c)| dot_int(row, a) + c).collect()
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &MonomialMorphism) -> Result<MonomialMorphism> {
        if self.source_dim() != inner.target_dim() {
            return Err(Error::Usage(format!(
                "cannot compose: outer expects {} coordinates, inner produces {}",
                self.source_dim(),
                inner.target_dim()
            )));
        }
        let alpha = self.alpha.mul(&inner.alpha)?;
        let consts = if self.consts.is_empty() && inner.consts.is_empty() {
            Vec::new()
        } else {
            let backend = self.consts.first().or(inner.consts.first()).map_or(Backend::Exact, ExplodedValue::backend);
            let pushed = CoordModelPoint::new(Vec::new(), inner.consts_or_one(backend));
            let outer_consts = MonomialMorphism { alpha: self.alpha.clone(), consts: self.consts.clone(), real: None };
            outer_consts.apply(&pushed)?.z
        };
        let real = match (&self.real, &inner.real) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => Some(a.compose(b)),
        };
        Ok(MonomialMorphism { alpha, consts, real })
    }

    /// Whether the tropical image of `source` lies in `target`.
    pub fn maps_cone(&self, source: &IntegralCone, target: &IntegralCone) -> bool {
        let c = self.const_exponents();
        let pulled = DualCone::new(source.m, &source.ineqs);
        target.ineqs.iter().all(|beta| {
            let back = self.alpha.transpose().apply(beta);
            pulled.contains(&back) && dot_int(beta, &c) >= rat(0)
        })
    }

    /// The exponent matrix maps `Z^m` onto the target lattice and the real
    /// part is surjective.
    pub fn check_family_condition(&self) -> bool {
        let snf = smith_normal_form(&self.alpha);
        let factors = snf.invariant_factors();
        let lattice_onto = factors.len() == self.target_dim() && factors.iter().all(|&d| d == 1);
        let real_onto = match &self.real {
            None => true,
            Some(r) => rank(&r.matrix) == r.matrix.len(),
        };
        lattice_onto && real_onto
    }

    /// Number of sheets `|alpha|` of the fiber over a point of the target
    /// torus and the cone `ker alpha ∩ A` they are modelled on.
    pub fn fiber_multiplicity(&self, source: &IntegralCone) -> Result<FiberMultiplicity> {
        if source.m != self.source_dim() {
            return Err(Error::Usage(format!("source cone has m = {}, morphism expects {}", source.m, self.source_dim())));
        }
        let factors = smith_normal_form(&self.alpha).invariant_factors();
        if factors.len() != self.target_dim() {
            return Err(Error::Rank(format!(
                "exponent matrix has rank {} but {} rows, it is not surjective over R",
                factors.len(),
                self.target_dim()
            )));
        }
        let mut ineqs = source.ineqs.clone();
        for row in self.alpha.rows() {
            ineqs.push(row.clone());
            ineqs.push(row.iter().map(|x| -x).collect());
        }
        Ok(FiberMultiplicity { multiplicity: factors.iter().product(), kernel_cone: IntegralCone::new(source.m, ineqs)? })
    }

    /// Tropical properness: the only point of `source` mapped to zero is zero.
    pub fn is_tropically_proper(&self, source: &IntegralCone) -> Result<bool> {
        let kernel = self.fiber_multiplicity(source).map(|f| f.kernel_cone).or_else(|e| match e {
            Error::Rank(_) => {
                let mut ineqs = source.ineqs.clone();
                for row in self.alpha.rows() {
                    ineqs.push(row.clone());
                    ineqs.push(row.iter().map(|x| -x).collect());
                }
                IntegralCone::new(source.m, ineqs)
            }
            other => Err(other),
        })?;
        Ok(kernel.dimension() == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::semiring::{Exploded, GaussianRational};

    fn ex(c: i64, e: Rational) -> ExplodedValue {
        ExplodedValue::Exact(Exploded::new(GaussianRational::new(rat(c), rat(0)), e))
    }

    #[test]
    fn family_examples() {
        assert!(!MonomialMorphism::from_rows(vec![vec![2]]).unwrap().check_family_condition());
        assert!(MonomialMorphism::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap().check_family_condition());
        assert!(MonomialMorphism::from_rows(vec![vec![1, 1]]).unwrap().check_family_condition());
    }

    #[test]
    fn multiplicity_examples() {
        let plane = IntegralCone::whole_space(2);
        let f = MonomialMorphism::from_rows(vec![vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(f.fiber_multiplicity(&plane).unwrap().multiplicity, 2);
        let id = MonomialMorphism::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(id.fiber_multiplicity(&plane).unwrap().multiplicity, 1);
        let quadrant = IntegralCone::standard(2, 2).unwrap();
        let g = MonomialMorphism::from_rows(vec![vec![2, 0]]).unwrap();
        let fm = g.fiber_multiplicity(&quadrant).unwrap();
        assert_eq!(fm.multiplicity, 2);
        assert_eq!(fm.kernel_cone.dimension(), 1);
        assert!(fm.kernel_cone.contains(&[rat(0), rat(5)]));
        assert!(!fm.kernel_cone.contains(&[rat(0), rat(-5)]));
        let flat = MonomialMorphism::from_rows(vec![vec![1, 1], vec![2, 2]]).unwrap();
        assert!(matches!(flat.fiber_multiplicity(&plane), Err(Error::Rank(_))));
        assert!(!g.is_tropically_proper(&quadrant).unwrap());
        assert!(id.is_tropically_proper(&quadrant).unwrap());
    }

    #[test]
    fn apply_and_compose() {
        let f = MonomialMorphism::new(
            IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap(),
            vec![ex(2, rat(1)), ex(1, rat(0))],
            None,
        )
        .unwrap();
        let g = MonomialMorphism::new(IntMatrix::from_rows(vec![vec![1, -1]]).unwrap(), vec![ex(3, frac(1, 2))], None).unwrap();
        let p = CoordModelPoint::new(vec![], vec![ex(5, rat(2)), ex(7, rat(1))]);
        let direct = g.apply(&f.apply(&p).unwrap()).unwrap();
        let composed = g.compose(&f).unwrap().apply(&p).unwrap();
        assert_eq!(direct, composed);
        assert_eq!(f.apply(&p).unwrap().tropical(), f.tropical_image(&p.tropical()));
        assert!(f.maps_cone(&IntegralCone::standard(2, 2).unwrap(), &IntegralCone::standard(2, 2).unwrap()));
        assert!(!g.maps_cone(&IntegralCone::standard(2, 2).unwrap(), &IntegralCone::standard(1, 1).unwrap()));
    }
}
