//! Integral affine polygons `{a : c + a . alpha >= 0}` with optionally strict
//! constraints, their strata and polyhedral complexes of them.

use serde::{Deserialize, Serialize};

use super::cone::{combinations, IntegralCone};
use crate::error::{Error, Result};
use crate::polyhedron::{feasible_point, rank, LinearConstraint, Polyhedron, Relation};
use crate::rational::{rat, serde_rational_vec, Rational};

/// Polygons with more non-strict constraints than this are not stratified.
pub const MAX_STRATA_CONSTRAINTS: usize = 16;

/// `c + a . alpha >= 0`, or `> 0` when strict.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolygonConstraint {
    pub c: Rational,
    pub alpha: Vec<i64>,
    pub strict: bool,
}

impl PolygonConstraint {
    pub fn new(c: Rational, alpha: Vec<i64>, strict: bool) -> Self {
        PolygonConstraint { c, alpha, strict }
    }

    pub fn linear(&self) -> LinearConstraint {
        let rel = if self.strict { Relation::Gt } else { Relation::Ge };
        LinearConstraint::from_ints(&self.alpha, self.c.clone(), rel)
    }

    fn equality(&self) -> LinearConstraint {
        LinearConstraint::from_ints(&self.alpha, self.c.clone(), Relation::Eq)
    }

    fn reversed(&self) -> PolygonConstraint {
        PolygonConstraint::new(-&self.c, self.alpha.iter().map(|x| -x).collect(), false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct ExplodedPolygon {
    m: usize,
    constraints: Vec<PolygonConstraint>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonRepr {
    m: usize,
    ineqs: Vec<Vec<i64>>,
    #[serde(default, with = "serde_rational_vec", skip_serializing_if = "Vec::is_empty")]
    c: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    strict: Vec<bool>,
}

impl TryFrom<PolygonRepr> for ExplodedPolygon {
    type Error = Error;
    fn try_from(r: PolygonRepr) -> Result<Self> {
        let k = r.ineqs.len();
        let c = if r.c.is_empty() { vec![rat(0); k] } else { r.c };
        let strict = if r.strict.is_empty() { vec![false; k] } else { r.strict };
        if c.len() != k || strict.len() != k {
            return Err(Error::Validation(format!("polygon has {k} inequalities but {} constants and {} strict flags", c.len(), strict.len())));
        }
        let constraints = r
            .ineqs
            .into_iter()
            .zip(c)
            .zip(strict)
            .map(|((alpha, c), strict)| PolygonConstraint::new(c, alpha, strict))
            .collect();
        ExplodedPolygon::new(r.m, constraints)
    }
}

impl From<ExplodedPolygon> for PolygonRepr {
    fn from(p: ExplodedPolygon) -> Self {
        let any_c = p.constraints.iter().any(|k| k.c != rat(0));
        let any_strict = p.constraints.iter().any(|k| k.strict);
        PolygonRepr {
            m: p.m,
            c: if any_c { p.constraints.iter().map(|k| k.c.clone()).collect() } else { Vec::new() },
            strict: if any_strict { p.constraints.iter().map(|k| k.strict).collect() } else { Vec::new() },
            ineqs: p.constraints.into_iter().map(|k| k.alpha).collect(),
        }
    }
}

/// A relatively open stratum: the points where exactly the `tight`
/// constraints hold with equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub tight: Vec<usize>,
    pub dim: usize,
    #[serde(with = "serde_rational_vec")]
    pub sample: Vec<Rational>,
    pub local_cone: IntegralCone,
}

impl ExplodedPolygon {
    pub fn new(m: usize, constraints: Vec<PolygonConstraint>) -> Result<Self> {
        if let Some(bad) = constraints.iter().find(|k| k.alpha.len() != m) {
            return Err(Error::Validation(format!("constraint {:?} does not have length {m}", bad.alpha)));
        }
        Ok(ExplodedPolygon { m, constraints })
    }

    pub fn from_cone(cone: &IntegralCone) -> Self {
        let constraints = cone.ineqs.iter().map(|a| PolygonConstraint::new(rat(0), a.clone(), false)).collect();
        ExplodedPolygon { m: cone.m, constraints }
    }

    /// Closed box `prod [lo_i, hi_i]`.
    pub fn closed_box(bounds: &[(Rational, Rational)]) -> Self {
        let m = bounds.len();
        let mut constraints = Vec::new();
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            let mut e = vec![0; m];
            e[i] = 1;
            constraints.push(PolygonConstraint::new(-lo, e.clone(), false));
            e[i] = -1;
            constraints.push(PolygonConstraint::new(hi.clone(), e, false));
        }
        ExplodedPolygon { m, constraints }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn constraints(&self) -> &[PolygonConstraint] {
        &self.constraints
    }

    pub fn is_conical(&self) -> bool {
        self.constraints.iter().all(|k| k.c == rat(0) && !k.strict)
    }

    /// The cone with the same inequalities, ignoring constants and strictness.
    pub fn recession_cone(&self) -> IntegralCone {
        IntegralCone { m: self.m, ineqs: self.constraints.iter().map(|k| k.alpha.clone()).collect() }
    }

    pub fn with_constraints(&self, extra: impl IntoIterator<Item = PolygonConstraint>) -> Self {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra);
        ExplodedPolygon { m: self.m, constraints }
    }

    pub fn intersect(&self, other: &ExplodedPolygon) -> Self {
        self.with_constraints(other.constraints.iter().cloned())
    }

    pub fn polyhedron(&self) -> Polyhedron {
        Polyhedron::new(self.m, self.constraints.iter().map(PolygonConstraint::linear).collect())
    }

    pub fn contains(&self, a: &[Rational]) -> bool {
        self.constraints.iter().all(|k| k.linear().holds(a))
    }

    pub fn is_empty(&self) -> bool {
        self.polyhedron().is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.polyhedron().dimension()
    }

    pub fn closure(&self) -> Self {
        let constraints = self.constraints.iter().map(|k| PolygonConstraint { strict: false, ..k.clone() }).collect();
        ExplodedPolygon { m: self.m, constraints }
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|k| k.strict)
    }

    /// Strata in order of dimension, then tight set. Strata on which a strict
    /// constraint would be tight are absent.
    pub fn strata(&self) -> Result<Vec<Stratum>> {
        if self.is_empty() {
            return Err(Error::Domain("polygon is empty".into()));
        }
        let candidates: Vec<usize> = (0..self.constraints.len()).filter(|&i| !self.constraints[i].strict).collect();
        if candidates.len() > MAX_STRATA_CONSTRAINTS {
            return Err(Error::Capability(format!(
                "stratification supports at most {MAX_STRATA_CONSTRAINTS} non-strict constraints, got {}",
                candidates.len()
            )));
        }
        // Constraints that are tight everywhere belong to every tight set.
        let forced: Vec<usize> = self.closure().polyhedron().implicit_equalities();
        let free: Vec<usize> = candidates.iter().copied().filter(|i| !forced.contains(i)).collect();
        let mut out = Vec::new();
        for k in 0..=free.len() {
            for pick in combinations(free.len(), k) {
                let mut tight: Vec<usize> = forced.clone();
                tight.extend(pick.iter().map(|&j| free[j]));
                tight.sort_unstable();
                if let Some(s) = self.stratum_for(&tight) {
                    out.push(s);
                }
            }
        }
        out.sort_by(|a, b| (a.dim, &a.tight).cmp(&(b.dim, &b.tight)));
        Ok(out)
    }

    fn stratum_for(&self, tight: &[usize]) -> Option<Stratum> {
        let cons: Vec<LinearConstraint> = self
            .constraints
            .iter()
            .enumerate()
            .map(|(i, k)| {
                if tight.contains(&i) {
                    k.equality()
                } else {
                    LinearConstraint::from_ints(&k.alpha, k.c.clone(), Relation::Gt)
                }
            })
            .collect();
        let sample = feasible_point(self.m, &cons)?;
        let rows: Vec<Vec<Rational>> =
            tight.iter().map(|&i| self.constraints[i].alpha.iter().map(|&x| rat(x)).collect()).collect();
        let local_cone = IntegralCone { m: self.m, ineqs: tight.iter().map(|&i| self.constraints[i].alpha.clone()).collect() };
        Some(Stratum { tight: tight.to_vec(), dim: self.m - rank(&rows), sample, local_cone })
    }

    /// The cone `A_k` with `P = sample + A_k` near the stratum's sample point.
    pub fn local_cone_at(&self, s: &Stratum) -> Result<IntegralCone> {
        let exact = s.sample.len() == self.m
            && self.constraints.iter().enumerate().all(|(i, k)| {
                let v = k.linear().eval(&s.sample);
                if s.tight.contains(&i) {
                    !k.strict && v == rat(0)
                } else {
                    v > rat(0)
                }
            });
        if !exact {
            return Err(Error::Usage(format!("tight set {:?} with the given sample is not a stratum of this polygon", s.tight)));
        }
        Ok(IntegralCone { m: self.m, ineqs: s.tight.iter().map(|&i| self.constraints[i].alpha.clone()).collect() })
    }

    /// Closure of a stratum as a polygon.
    pub fn face(&self, s: &Stratum) -> ExplodedPolygon {
        let closed = self.closure();
        let reversed: Vec<PolygonConstraint> = s.tight.iter().map(|&i| self.constraints[i].reversed()).collect();
        closed.with_constraints(reversed)
    }

    /// Closures of all strata of the closure of this polygon.
    pub fn faces(&self) -> Result<Vec<ExplodedPolygon>> {
        let closed = self.closure();
        Ok(closed.strata()?.iter().map(|s| closed.face(s)).collect())
    }

    pub fn set_eq(&self, other: &ExplodedPolygon) -> bool {
        self.m == other.m && self.polyhedron().set_eq(&other.polyhedron())
    }

    pub fn contains_set(&self, other: &ExplodedPolygon) -> bool {
        self.polyhedron().contains_set(&other.polyhedron())
    }

    /// Same set with duplicate and redundant constraints removed.
    pub fn simplified(&self) -> ExplodedPolygon {
        let mut kept: Vec<PolygonConstraint> = Vec::new();
        for k in &self.constraints {
            if !kept.contains(k) {
                kept.push(k.clone());
            }
        }
        let mut i = 0;
        while i < kept.len() {
            let mut rest = kept.clone();
            let k = rest.remove(i);
            let others = Polyhedron::new(self.m, rest.iter().map(PolygonConstraint::linear).collect());
            let implied = match k.linear().violated() {
                Some(v) => others.with([v]).is_empty(),
                None => false,
            };
            if implied {
                kept = rest;
            } else {
                i += 1;
            }
        }
        ExplodedPolygon { m: self.m, constraints: kept }
    }
}

/// Whether `cells` form a complete complex. The complex consists of the
/// given cells together with their faces; it is complete when no cell is
/// missing a face, i.e. every constraint is non-strict. Two cells meeting
/// anywhere but in a common face is a validation error.
pub fn is_complete_complex(cells: &[ExplodedPolygon]) -> Result<bool> {
    let mut faces = Vec::with_capacity(cells.len());
    for (i, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::Validation(format!("cell {i} is empty")));
        }
        if cells.iter().any(|c| c.m != cell.m) {
            return Err(Error::Validation("cells live in different dimensions".into()));
        }
        faces.push(cell.faces()?);
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let meet = cells[i].closure().intersect(&cells[j].closure());
            if meet.is_empty() {
                continue;
            }
            let is_face_of = |fs: &[ExplodedPolygon]| fs.iter().any(|f| f.set_eq(&meet));
            if !is_face_of(&faces[i]) || !is_face_of(&faces[j]) {
                return Err(Error::Validation(format!("cells {i} and {j} do not meet in a common face")));
            }
        }
    }
    Ok(!cells.iter().any(ExplodedPolygon::has_strict))
}
