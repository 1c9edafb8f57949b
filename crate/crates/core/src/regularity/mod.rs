//! Strata projections `e_S`, the difference operators `Delta_I`, the weights
//! `w_I` and Hölder-type seminorm estimates on coordinate models.

mod poly;
mod sampled;

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coordmodel::CoordModel;
use crate::error::{Error, Result};
use crate::lattice::{combinations, Stratum};
use crate::rational::{dot_int, Rational};

pub use poly::SmoothPolynomial;
pub use sampled::{seminorm_estimate, SampledFunction, SeminormReport, SeminormTerm};

/// Smooth coordinates sent to zero by `e_S`: `mask[j]` holds when the dual
/// generator `alpha^j` is positive on the interior of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ZeroMask(pub Vec<bool>);

impl ZeroMask {
    pub fn at(model: &CoordModel, a: &[Rational]) -> Self {
        ZeroMask(model.dual_basis.generators.iter().map(|g| dot_int(g, a) > Rational::from_integer(0.into())).collect())
    }

    pub fn union(&self, other: &ZeroMask) -> ZeroMask {
        ZeroMask(self.0.iter().zip(&other.0).map(|(a, b)| *a || *b).collect())
    }

    pub fn empty(k: usize) -> ZeroMask {
        ZeroMask(vec![false; k])
    }

    /// Whether a monomial with these exponents survives the projection.
    pub fn keeps(&self, powers: &[u64]) -> bool {
        self.0.iter().zip(powers).all(|(&z, &p)| !z || p == 0)
    }

    pub fn apply(&self, w: &[Complex64]) -> Vec<Complex64> {
        w.iter().zip(&self.0).map(|(&x, &z)| if z { Complex64::new(0.0, 0.0) } else { x }).collect()
    }
}

/// A set of nonzero strata of a model's cone, named by their tight sets.
#[derive(Clone, Debug, PartialEq)]
pub struct StrataSelector {
    pub strata: Vec<Stratum>,
}

impl StrataSelector {
    pub fn new(model: &CoordModel, tight_sets: &[Vec<usize>]) -> Result<Self> {
        let faces = model.cone.faces()?;
        let zero = model.cone.zero_stratum()?;
        let mut strata = Vec::new();
        let mut seen = BTreeSet::new();
        for t in tight_sets {
            let mut t = t.clone();
            t.sort_unstable();
            t.dedup();
            let s = faces
                .iter()
                .find(|s| s.tight == t)
                .ok_or_else(|| Error::Usage(format!("tight set {t:?} is not a stratum of the model cone")))?;
            if s.tight == zero.tight {
                return Err(Error::Usage("the zero stratum cannot be selected".into()));
            }
            if seen.insert(t) {
                strata.push(s.clone());
            }
        }
        Ok(StrataSelector { strata })
    }

    /// Every stratum except the zero stratum.
    pub fn all_nonzero(model: &CoordModel) -> Result<Self> {
        let zero = model.cone.zero_stratum()?;
        Ok(StrataSelector { strata: model.cone.faces()?.into_iter().filter(|s| s.tight != zero.tight).collect() })
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn tight_sets(&self) -> Vec<Vec<usize>> {
        self.strata.iter().map(|s| s.tight.clone()).collect()
    }

    pub fn masks(&self, model: &CoordModel) -> Vec<ZeroMask> {
        self.strata.iter().map(|s| ZeroMask::at(model, &s.sample)).collect()
    }

    /// Collections of at most `k` distinct strata, the empty one included.
    pub fn collections(&self, k: usize) -> Vec<Vec<usize>> {
        (0..=k.min(self.len())).flat_map(|size| combinations(self.len(), size)).collect()
    }

    pub fn subset(&self, pick: &[usize]) -> StrataSelector {
        StrataSelector { strata: pick.iter().map(|&i| self.strata[i].clone()).collect() }
    }
}

/// `Delta_I = prod_{S in I} (id - e_S)` expanded as a signed sum of projections.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaOperator {
    pub terms: Vec<(i32, ZeroMask)>,
}

impl DeltaOperator {
    pub fn new(k: usize, masks: &[ZeroMask]) -> Self {
        let mut terms = vec![(1, ZeroMask::empty(k))];
        for m in masks {
            let extra: Vec<(i32, ZeroMask)> = terms.iter().map(|(s, t)| (-s, t.union(m))).collect();
            terms.extend(extra);
        }
        DeltaOperator { terms }
    }

    pub fn for_strata(model: &CoordModel, sel: &StrataSelector) -> Self {
        Self::new(model.dual_basis.len(), &sel.masks(model))
    }
}

pub fn apply_e_s(model: &CoordModel, s: &Stratum, f: &SmoothPolynomial) -> SmoothPolynomial {
    f.project(&ZeroMask::at(model, &s.sample))
}

pub fn apply_delta_i(model: &CoordModel, sel: &StrataSelector, f: &SmoothPolynomial) -> SmoothPolynomial {
    f.apply(&DeltaOperator::for_strata(model, sel))
}

/// `w_I = sum_i |z^{beta_i}|` over generators `beta_i` of the monomials fixed by
/// `Delta_I`, i.e. those positive on every stratum of `I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub generators: Vec<Vec<i64>>,
    /// Exponents of each generator in the smooth coordinates.
    pub powers: Vec<Vec<u64>>,
}

impl WeightFunction {
    pub fn eval(&self, w: &[Complex64]) -> f64 {
        self.powers
            .iter()
            .map(|p| p.iter().zip(w).map(|(&k, z)| z.norm().powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn as_polynomials(&self) -> Vec<SmoothPolynomial> {
        self.powers.iter().map(|p| SmoothPolynomial::monomial(p.clone())).collect()
    }
}

pub fn weight_w_i(model: &CoordModel, sel: &StrataSelector) -> Result<WeightFunction> {
    let hb = &model.dual_basis;
    let k = hb.len();
    if sel.is_empty() {
        return Ok(WeightFunction { generators: vec![vec![0; model.m()]], powers: vec![vec![0; k]] });
    }
    let masks = sel.masks(model);
    let in_ideal = |p: &[u64]| masks.iter().all(|m| !m.keeps(p));
    // A minimal element only needs one positive summand per stratum.
    let mut candidates: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut frontier: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0; k]]);
    for _ in 0..sel.len() {
        let mut next = BTreeSet::new();
        for p in &frontier {
            for j in 0..k {
                let mut q = p.clone();
                q[j] += 1;
                next.insert(q);
            }
        }
        candidates.extend(next.iter().filter(|p| in_ideal(p)).cloned());
        frontier = next;
    }
    let lattice_point = |p: &[u64]| -> Vec<i64> {
        (0..model.m()).map(|i| p.iter().zip(&hb.generators).map(|(&c, g)| c as i64 * g[i]).sum()).collect()
    };
    let mut points: BTreeSet<Vec<i64>> = candidates.iter().map(|p| lattice_point(p)).collect();
    let zero = Rational::from_integer(0.into());
    let in_ideal_point = |v: &[i64]| sel.strata.iter().all(|s| dot_int(v, &s.sample) > zero);
    points.retain(|v| {
        !hb.generators.iter().any(|g| {
            let rest: Vec<i64> = v.iter().zip(g).map(|(a, b)| a - b).collect();
            hb.dual_cone().contains(&rest) && in_ideal_point(&rest)
        })
    });
    let generators: Vec<Vec<i64>> = points.into_iter().collect();
    let powers = generators
        .iter()
        .map(|g| hb.decompose(g).ok_or_else(|| Error::Validation(format!("{g:?} is not in the dual monoid"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightFunction { generators, powers })
}
