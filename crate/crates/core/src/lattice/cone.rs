//! Integral cones `{a : a . alpha >= 0}` and their integral duals.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::{dot, left_kernel, primitive, IntMatrix};
use super::polygon::{ExplodedPolygon, Stratum};
use crate::error::{Error, Result};
use crate::polyhedron::{nullspace, rank, LinearConstraint, Polyhedron, Relation};
use crate::rational::{rat, Rational};

/// Largest ambient dimension handled by Hilbert basis enumeration.
pub const MAX_HILBERT_DIM: usize = 4;
const MAX_BOX_POINTS: u64 = 60_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConeRepr")]
pub struct IntegralCone {
    pub m: usize,
    pub ineqs: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeRepr {
    m: usize,
    ineqs: Vec<Vec<i64>>,
}

impl TryFrom<ConeRepr> for IntegralCone {
    type Error = Error;
    fn try_from(r: ConeRepr) -> Result<Self> {
        IntegralCone::new(r.m, r.ineqs)
    }
}

impl IntegralCone {
    pub fn new(m: usize, ineqs: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(bad) = ineqs.iter().find(|v| v.len() != m) {
            return Err(Error::Validation(format!("inequality {bad:?} does not have length {m}")));
        }
        Ok(IntegralCone { m, ineqs })
    }

    pub fn whole_space(m: usize) -> Self {
        IntegralCone { m, ineqs: Vec::new() }
    }

    /// `(R+)^n x R^(m-n)`: the first `n` coordinates are nonnegative.
    pub fn standard(m: usize, n: usize) -> Result<Self> {
        if n > m {
            return Err(Error::Validation(format!("cannot bound {n} of {m} coordinates")));
        }
        let ineqs = (0..n)
            .map(|i| {
                let mut e = vec![0; m];
                e[i] = 1;
                e
            })
            .collect();
        Ok(IntegralCone { m, ineqs })
    }

    pub fn polyhedron(&self) -> Polyhedron {
        let cons = self.ineqs.iter().map(|a| LinearConstraint::from_ints(a, rat(0), Relation::Ge)).collect();
        Polyhedron::new(self.m, cons)
    }

    pub fn as_polygon(&self) -> ExplodedPolygon {
        ExplodedPolygon::from_cone(self)
    }

    pub fn contains(&self, a: &[Rational]) -> bool {
        self.ineqs.iter().all(|alpha| !dot_rat(alpha, a).is_negative())
    }

    pub fn contains_int(&self, a: &[i64]) -> bool {
        self.ineqs.iter().all(|alpha| dot(alpha, a) >= 0)
    }

    pub fn is_full_dimensional(&self) -> bool {
        let cons: Vec<_> = self
            .ineqs
            .iter()
            .filter(|a| a.iter().any(|&x| x != 0))
            .map(|a| LinearConstraint::from_ints(a, rat(0), Relation::Gt))
            .collect();
        crate::polyhedron::feasible_point(self.m, &cons).is_some()
    }

    pub fn dimension(&self) -> usize {
        self.polyhedron().dimension().expect("cones contain the origin")
    }

    pub fn dual(&self) -> DualCone {
        DualCone::new(self.m, &self.ineqs)
    }

    pub fn dual_cone_hilbert_basis(&self) -> Result<HilbertBasis> {
        if self.m > MAX_HILBERT_DIM {
            return Err(Error::Capability(format!(
                "Hilbert basis enumeration supports m <= {MAX_HILBERT_DIM}, got {}",
                self.m
            )));
        }
        if !self.is_full_dimensional() {
            return Err(Error::Validation("cone is not full-dimensional, its dual is not pointed".into()));
        }
        HilbertBasis::compute(self.dual())
    }

    /// Relatively open faces, one per realizable tight set.
    pub fn faces(&self) -> Result<Vec<Stratum>> {
        self.as_polygon().strata()
    }

    /// The face on which every inequality is tight.
    pub fn zero_stratum(&self) -> Result<Stratum> {
        let all: Vec<usize> = (0..self.ineqs.len()).collect();
        self.faces()?
            .into_iter()
            .find(|s| s.tight == all)
            .ok_or_else(|| Error::Validation("cone has no zero stratum".into()))
    }
}

pub(crate) fn dot_rat(a: &[i64], x: &[Rational]) -> Rational {
    a.iter().zip(x).fold(Rational::zero(), |acc, (&ai, xi)| acc + xi * Rational::from_integer(ai.into()))
}

/// Scales a rational vector to a primitive integer vector.
pub fn integer_direction(v: &[Rational]) -> Vec<i64> {
    let l = v.iter().fold(num_bigint::BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<i64> = v
        .iter()
        .map(|q| {
            let n = q.numer() * (&l / q.denom());
            i64::try_from(n).expect("coordinate fits in i64")
        })
        .collect();
    primitive(&ints)
}

/// Real cone spanned by integer generators, with an H-description:
/// `x` is in the cone iff `n . x = 0` for every `orth` row and `h . x >= 0`
/// for every facet normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCone {
    pub m: usize,
    pub generators: Vec<Vec<i64>>,
    pub orth: Vec<Vec<i64>>,
    pub facets: Vec<Vec<i64>>,
}

impl DualCone {
    pub fn new(m: usize, gens: &[Vec<i64>]) -> Self {
        let generators: Vec<Vec<i64>> = gens
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .map(|g| primitive(g))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let as_rat = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        let grows: Vec<Vec<Rational>> = generators.iter().map(|g| as_rat(g)).collect();
        let d = rank(&grows);
        let orth: Vec<Vec<i64>> = nullspace(&grows, m).iter().map(|v| integer_direction(v)).collect();

        let mut facets = BTreeSet::new();
        if d > 0 {
            for subset in combinations(generators.len(), d - 1) {
                let mut rows: Vec<Vec<Rational>> = subset.iter().map(|&i| grows[i].clone()).collect();
                if rank(&rows) != d - 1 {
                    continue;
                }
                rows.extend(orth.iter().map(|v| as_rat(v)));
                let normal = nullspace(&rows, m);
                if normal.len() != 1 {
                    continue;
                }
                let h = integer_direction(&normal[0]);
                let vals: Vec<i64> = generators.iter().map(|g| dot(&h, g)).collect();
                if vals.iter().all(|&v| v >= 0) {
                    facets.insert(h);
                } else if vals.iter().all(|&v| v <= 0) {
                    facets.insert(h.iter().map(|x| -x).collect());
                }
            }
        }
        DualCone { m, generators, orth, facets: facets.into_iter().collect() }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.orth.iter().all(|n| dot(n, x) == 0) && self.facets.iter().all(|h| dot(h, x) >= 0)
    }

    /// Sum of facet normals; strictly positive on the nonzero points of a
    /// pointed cone.
    pub fn grading(&self) -> Vec<i64> {
        let mut g = vec![0; self.m];
        for h in &self.facets {
            for (a, b) in g.iter_mut().zip(h) {
                *a += b;
            }
        }
        g
    }

    /// Bound on the sup norm of Hilbert basis elements.
    fn search_radius(&self) -> i64 {
        let grows: Vec<Vec<Rational>> =
            self.generators.iter().map(|g| g.iter().map(|&x| rat(x)).collect()).collect();
        let d = rank(&grows);
        let mut norms: Vec<i64> = self.generators.iter().map(|g| g.iter().map(|x| x.abs()).max().unwrap_or(0)).collect();
        norms.sort_unstable_by(|a, b| b.cmp(a));
        norms.iter().take(d).sum()
    }
}

/// Minimal generators of the monoid of lattice points of a pointed cone,
/// and a basis of the integer relations among them.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertBasis {
    pub generators: Vec<Vec<i64>>,
    pub relations: Vec<Vec<i64>>,
    #[serde(skip)]
    cone: DualCone,
}

impl HilbertBasis {
    fn compute(cone: DualCone) -> Result<Self> {
        let m = cone.m;
        if cone.generators.is_empty() {
            return Ok(HilbertBasis { generators: Vec::new(), relations: Vec::new(), cone });
        }
        let radius = cone.search_radius();
        let side = (2 * radius + 1) as u64;
        let total = side.checked_pow(m as u32).filter(|&t| t <= MAX_BOX_POINTS).ok_or_else(|| {
            Error::Capability(format!("Hilbert basis search box of radius {radius} in dimension {m} is too large"))
        })?;
        let grading = cone.grading();
        let mut candidates: Vec<(i64, Vec<i64>)> = (0..total)
            .into_par_iter()
            .filter_map(|idx| {
                let mut x = vec![0i64; m];
                let mut rest = idx;
                for c in x.iter_mut() {
                    *c = (rest % side) as i64 - radius;
                    rest /= side;
                }
                (x.iter().any(|&v| v != 0) && cone.contains(&x)).then(|| (dot(&grading, &x), x))
            })
            .collect();
        candidates.sort();

        let mut basis: Vec<Vec<i64>> = Vec::new();
        for (_, x) in candidates {
            let reducible = basis.iter().any(|y| {
                let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                cone.contains(&diff)
            });
            if !reducible {
                basis.push(x);
            }
        }
        basis.sort();
        let relations = if basis.is_empty() {
            Vec::new()
        } else {
            left_kernel(&IntMatrix::from_rows(basis.clone())?).rows().to_vec()
        };
        Ok(HilbertBasis { generators: basis, relations, cone })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dual_cone(&self) -> &DualCone {
        &self.cone
    }

    /// Writes a lattice point of the cone as a nonnegative combination of
    /// the generators. `None` when the point is outside the cone.
    pub fn decompose(&self, v: &[i64]) -> Option<Vec<u64>> {
        let mut coeffs = vec![0u64; self.generators.len()];
        let mut dead = HashSet::new();
        self.search(v.to_vec(), &mut coeffs, &mut dead).then_some(coeffs)
    }

    fn search(&self, v: Vec<i64>, coeffs: &mut [u64], dead: &mut HashSet<Vec<i64>>) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if dead.contains(&v) || !self.cone.contains(&v) {
            return false;
        }
        for (i, g) in self.generators.iter().enumerate() {
            let rest: Vec<i64> = v.iter().zip(g).map(|(a, b)| a - b).collect();
            if !self.cone.contains(&rest) {
                continue;
            }
            coeffs[i] += 1;
            if self.search(rest, coeffs, dead) {
                return true;
            }
            coeffs[i] -= 1;
        }
        dead.insert(v);
        false
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_of_skew_cone() {
        let cone = IntegralCone::new(2, vec![vec![0, 1], vec![2, -1]]).unwrap();
        let hb = cone.dual_cone_hilbert_basis().unwrap();
        assert_eq!(hb.generators, vec![vec![0, 1], vec![1, 0], vec![2, -1]]);
        assert_eq!(hb.relations, vec![vec![1, -2, 1]]);
        let c = hb.decompose(&[3, 0]).unwrap();
        let sum: Vec<i64> = (0..2).map(|k| (0..3).map(|i| c[i] as i64 * hb.generators[i][k]).sum()).collect();
        assert_eq!(sum, vec![3, 0]);
        assert_eq!(hb.decompose(&[-1, 0]), None);
    }

    #[test]
    fn standard_cones() {
        let hb = IntegralCone::standard(3, 2).unwrap().dual_cone_hilbert_basis().unwrap();
        assert_eq!(hb.generators, vec![vec![0, 1, 0], vec![1, 0, 0]]);
        assert!(hb.relations.is_empty());
        assert!(IntegralCone::whole_space(3).dual_cone_hilbert_basis().unwrap().is_empty());
        let err = IntegralCone::new(2, vec![vec![1, 0], vec![-1, 0]]).unwrap().dual_cone_hilbert_basis();
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn facets_of_dual() {
        let d = DualCone::new(2, &[vec![0, 1], vec![2, -1]]);
        assert!(d.contains(&[1, 0]));
        assert!(!d.contains(&[-1, 1]));
        assert_eq!(d.facets.len(), 2);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
