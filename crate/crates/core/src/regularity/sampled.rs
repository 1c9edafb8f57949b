use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{weight_w_i, DeltaOperator, StrataSelector, ZeroMask};
use crate::coordmodel::CoordModel;
use crate::error::{Error, Result};

type PointKey = Vec<(u64, u64)>;

fn key(w: &[Complex64]) -> PointKey {
    // -0.0 and 0.0 must coincide.
    w.iter().map(|z| ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())).collect()
}

/// Complex values of a function at sample points of the smooth coordinates.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    points: Vec<Vec<Complex64>>,
    values: Vec<Complex64>,
    index: HashMap<PointKey, usize>,
}

impl SampledFunction {
    pub fn from_points(points: Vec<Vec<Complex64>>, values: Vec<Complex64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Data(format!("{} sample points but {} values", points.len(), values.len())));
        }
        if points.is_empty() {
            return Err(Error::Data("no sample points".into()));
        }
        let k = points[0].len();
        if points.iter().any(|p| p.len() != k) {
            return Err(Error::Data("sample points have different lengths".into()));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if let Some(i) = values.iter().position(|v| !finite(v)) {
            return Err(Error::Data(format!("sample value {i} is not finite")));
        }
        if points.iter().flatten().any(|z| !finite(z)) {
            return Err(Error::Data("sample point is not finite".into()));
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(key(p), i).is_some() {
                return Err(Error::Data(format!("sample point {i} is repeated")));
            }
        }
        Ok(SampledFunction { points, values, index })
    }

    /// Product grid over per-coordinate axes, values in row-major order.
    pub fn tensor(axes: &[Vec<Complex64>], values: Vec<Complex64>) -> Result<Self> {
        Self::from_points(tensor_points(axes), values)
    }

    pub fn tabulate(axes: &[Vec<Complex64>], f: impl Fn(&[Complex64]) -> Complex64 + Sync) -> Result<Self> {
        let points = tensor_points(axes);
        let values = points.par_iter().map(|p| f(p)).collect();
        Self::from_points(points, values)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value_at(&self, w: &[Complex64]) -> Result<Complex64> {
        self.index
            .get(&key(w))
            .map(|&i| self.values[i])
            .ok_or_else(|| Error::Data(format!("grid has no sample at {w:?}; it must be closed under the strata projections")))
    }

    /// Fails unless every sample satisfies the binomial relations of the model.
    pub fn check_model(&self, model: &CoordModel) -> Result<()> {
        let hb = &model.dual_basis;
        if self.arity() != hb.len() {
            return Err(Error::Data(format!("samples have {} coordinates, the model has {}", self.arity(), hb.len())));
        }
        for (i, p) in self.points.iter().enumerate() {
            for r in &hb.relations {
                let side = |sign: i64| -> Complex64 {
                    r.iter().zip(p).filter(|(&c, _)| c * sign > 0).map(|(&c, z)| z.powu(c.unsigned_abs() as u32)).product()
                };
                let (a, b) = (side(1), side(-1));
                if (a - b).norm() > 1e-9 * (1.0 + a.norm().max(b.norm())) {
                    return Err(Error::Data(format!("sample {i} violates the relation {r:?}")));
                }
            }
        }
        Ok(())
    }

    fn map_values(&self, f: impl Fn(&[Complex64]) -> Result<Complex64> + Sync) -> Result<Self> {
        let values = self.points.par_iter().map(|p| f(p)).collect::<Result<Vec<_>>>()?;
        Ok(SampledFunction { points: self.points.clone(), values, index: self.index.clone() })
    }

    pub fn project(&self, mask: &ZeroMask) -> Result<Self> {
        self.map_values(|p| self.value_at(&mask.apply(p)))
    }

    pub fn apply(&self, op: &DeltaOperator) -> Result<Self> {
        self.map_values(|p| delta_at(self, op, p))
    }
}

fn tensor_points(axes: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|p| {
                axis.iter().map(move |z| {
                    let mut q = p.clone();
                    q.push(*z);
                    q
                })
            })
            .collect()
    })
}

fn delta_at(f: &SampledFunction, op: &DeltaOperator, p: &[Complex64]) -> Result<Complex64> {
    op.terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, (sign, mask)| Ok(acc + f.value_at(&mask.apply(p))? * *sign as f64))
}

#[derive(Clone, Debug, Serialize)]
pub struct SeminormTerm {
    /// Tight sets of the strata in the collection.
    pub strata: Vec<Vec<usize>>,
    pub weight: Vec<String>,
    pub sup: f64,
    pub argmax: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeminormReport {
    pub delta: f64,
    pub k: usize,
    pub value: f64,
    pub terms: Vec<SeminormTerm>,
}

/// Largest `|Delta_I f| / w_I^delta` over the samples with `w_I != 0`, for
/// every collection `I` of at most `k` nonzero strata.
pub fn seminorm_estimate(model: &CoordModel, f: &SampledFunction, k: usize, delta: f64) -> Result<SeminormReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("exponent must lie in (0, 1], got {delta}")));
    }
    f.check_model(model)?;
    let sel = StrataSelector::all_nonzero(model)?;
    let mut terms = Vec::new();
    for pick in sel.collections(k) {
        let sub = sel.subset(&pick);
        let op = DeltaOperator::for_strata(model, &sub);
        let weight = weight_w_i(model, &sub)?;
        let best = f
            .points
            .par_iter()
            .enumerate()
            .map(|(i, p)| -> Result<Option<(f64, usize)>> {
                let w = weight.eval(p);
                if w == 0.0 {
                    return Ok(None);
                }
                let r = delta_at(f, &op, p)?.norm() / w.powf(delta);
                if r.is_nan() {
                    return Err(Error::Data(format!("undefined ratio at sample {i}")));
                }
                Ok(Some((r, i)))
            })
            .try_reduce(|| None, |a, b| Ok(pick_max(a, b)))?;
        terms.push(SeminormTerm {
            strata: sub.tight_sets(),
            weight: weight.as_polynomials().iter().map(|p| p.to_string()).collect(),
            sup: best.map_or(0.0, |b| b.0),
            argmax: best.map(|(_, i)| f.points[i].iter().map(|z| [z.re, z.im]).collect()),
        });
    }
    let value = terms.iter().map(|t| t.sup).fold(0.0, f64::max);
    Ok(SeminormReport { delta, k, value, terms })
}

fn pick_max(a: Option<(f64, usize)>, b: Option<(f64, usize)>) -> Option<(f64, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}
