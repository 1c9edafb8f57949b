//! Corner loci of plane tropical polynomials, balancing and the dual
//! subdivision of the Newton polygon.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{TropicalPolynomial, TropicalTerm};
use crate::error::{Error, Result};
use crate::lattice::matrix::{gcd_slice, primitive};
use crate::rational::{rat, serde_rational_vec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// Primitive direction from `from` to `to`.
    pub direction: Vec<i64>,
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dual: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRay {
    pub from: usize,
    pub direction: Vec<i64>,
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dual: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphLine {
    #[serde(with = "serde_rational_vec")]
    pub point: Vec<Rational>,
    pub direction: Vec<i64>,
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dual: Vec<Vec<i64>>,
}

/// A cell `conv(S)` of the dual subdivision; `lattice_area` is twice the
/// Euclidean area.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCell {
    pub points: Vec<Vec<i64>>,
    pub hull: Vec<Vec<i64>>,
    pub lattice_area: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSubdivision {
    pub newton_polygon: Vec<Vec<i64>>,
    pub newton_area: u64,
    pub cells: Vec<DualCell>,
}

/// Weighted rational graph with vertices, bounded edges, rays and lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedGraph {
    pub n: usize,
    #[serde(with = "crate::rational::serde_rational_matrix")]
    pub vertices: Vec<Vec<Rational>>,
    #[serde(default)]
    pub edges: Vec<GraphEdge>,
    #[serde(default)]
    pub rays: Vec<GraphRay>,
    #[serde(default)]
    pub lines: Vec<GraphLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_subdivision: Option<DualSubdivision>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub balanced: bool,
    /// Weighted sum of outgoing directions at each vertex.
    pub defects: Vec<Vec<i64>>,
}

/// Checks the balancing condition at every vertex.
pub fn check_balancing(g: &BalancedGraph) -> Result<BalanceReport> {
    let dirs = g
        .edges
        .iter()
        .map(|e| (&e.direction, e.weight))
        .chain(g.rays.iter().map(|r| (&r.direction, r.weight)))
        .chain(g.lines.iter().map(|l| (&l.direction, l.weight)));
    for (d, w) in dirs {
        if d.len() != g.n || gcd_slice(d) != 1 {
            return Err(Error::Validation(format!("direction {d:?} is not a primitive vector in dimension {}", g.n)));
        }
        if w == 0 {
            return Err(Error::Validation("edge weights must be positive".into()));
        }
    }
    let nv = g.vertices.len();
    let bad_index = g.edges.iter().any(|e| e.from >= nv || e.to >= nv) || g.rays.iter().any(|r| r.from >= nv);
    if bad_index {
        return Err(Error::Validation("edge refers to a missing vertex".into()));
    }
    let mut defects = vec![vec![0i64; g.n]; nv];
    let mut push = |v: usize, d: &[i64], w: i64| {
        for (acc, x) in defects[v].iter_mut().zip(d) {
            *acc += w * x;
        }
    };
    for e in &g.edges {
        push(e.from, &e.direction, e.weight as i64);
        push(e.to, &e.direction, -(e.weight as i64));
    }
    for r in &g.rays {
        push(r.from, &r.direction, r.weight as i64);
    }
    let balanced = defects.iter().all(|d| d.iter().all(|&x| x == 0));
    Ok(BalanceReport { balanced, defects })
}

type Point = [Rational; 2];

fn dot2(a: &[i64], p: &Point) -> Rational {
    &p[0] * rat(a[0]) + &p[1] * rat(a[1])
}

fn value(t: &TropicalTerm, p: &Point) -> Rational {
    &t.y + dot2(&t.alpha, p)
}

fn achieving(terms: &[TropicalTerm], p: &Point) -> Vec<usize> {
    let vals: Vec<Rational> = terms.iter().map(|t| value(t, p)).collect();
    let min = vals.iter().min().expect("nonempty").clone();
    (0..terms.len()).filter(|&i| vals[i] == min).collect()
}

/// Corner locus of a polynomial in two variables, with weights and the dual
/// subdivision of its Newton polygon.
pub fn corner_locus(p: &TropicalPolynomial) -> Result<BalancedGraph> {
    if p.n != 2 {
        return Err(Error::Capability(format!("corner loci are computed for two variables, got {}", p.n)));
    }
    let terms = p.merged().terms;
    if terms.len() < 2 {
        return Err(Error::Domain("degenerate polynomial: fewer than two distinct terms, the corner locus is empty".into()));
    }
    let k = terms.len();

    let mut vertex_sets: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let u = sub(&terms[i].alpha, &terms[j].alpha);
                let v = sub(&terms[i].alpha, &terms[l].alpha);
                let det = u[0] * v[1] - u[1] * v[0];
                if det == 0 {
                    continue;
                }
                // u . a = y_j - y_i, v . a = y_l - y_i
                let bu = &terms[j].y - &terms[i].y;
                let bv = &terms[l].y - &terms[i].y;
                let d = rat(det);
                let a = [(&bu * rat(v[1]) - &bv * rat(u[1])) / &d, (&bv * rat(u[0]) - &bu * rat(v[0])) / &d];
                let s = achieving(&terms, &a);
                if s.contains(&i) && s.contains(&j) && s.contains(&l) {
                    vertex_sets.insert(a, s);
                }
            }
        }
    }
    let vertices: Vec<Point> = vertex_sets.keys().cloned().collect();
    let index_of = |a: &Point| vertices.iter().position(|v| v == a).expect("edge endpoint is a vertex");

    let mut edges = Vec::new();
    let mut rays = Vec::new();
    let mut lines = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let u = sub(&terms[i].alpha, &terms[j].alpha);
            let dir = primitive(&[-u[1], u[0]]);
            let uu = rat(u[0] * u[0] + u[1] * u[1]);
            let rhs = &terms[j].y - &terms[i].y;
            let p0: Point = [&rhs * rat(u[0]) / &uu, &rhs * rat(u[1]) / &uu];
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            let mut empty = false;
            for (l, t) in terms.iter().enumerate() {
                if l == i || l == j {
                    continue;
                }
                // y_l + alpha_l . (p0 + s dir) >= y_i + alpha_i . (p0 + s dir)
                let c = sub(&t.alpha, &terms[i].alpha);
                let coef = rat(c[0] * dir[0] + c[1] * dir[1]);
                let need = value(&terms[i], &p0) - value(t, &p0);
                if coef.is_zero() {
                    empty |= need.is_positive();
                } else if coef.is_positive() {
                    let b = need / coef;
                    lo = Some(lo.map_or(b.clone(), |x| x.max(b)));
                } else {
                    let b = need / coef;
                    hi = Some(hi.map_or(b.clone(), |x| x.min(b)));
                }
            }
            if empty {
                continue;
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l >= h {
                    continue;
                }
            }
            let s_mid = match (&lo, &hi) {
                (Some(l), Some(h)) => (l + h) / rat(2),
                (Some(l), None) => l + rat(1),
                (None, Some(h)) => h - rat(1),
                (None, None) => rat(0),
            };
            let at = |s: &Rational| -> Point { [&p0[0] + s * rat(dir[0]), &p0[1] + s * rat(dir[1])] };
            let s_set = achieving(&terms, &at(&s_mid));
            if seen.contains(&s_set) {
                continue;
            }
            seen.push(s_set.clone());
            let (dual, weight) = dual_segment(&terms, &s_set);
            match (&lo, &hi) {
                (Some(l), Some(h)) => edges.push(GraphEdge {
                    from: index_of(&at(l)),
                    to: index_of(&at(h)),
                    direction: dir.clone(),
                    weight,
                    dual,
                }),
                (Some(l), None) => rays.push(GraphRay { from: index_of(&at(l)), direction: dir.clone(), weight, dual }),
                (None, Some(h)) => rays.push(GraphRay {
                    from: index_of(&at(h)),
                    direction: dir.iter().map(|x| -x).collect(),
                    weight,
                    dual,
                }),
                (None, None) => {
                    let d = if dir.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                        dir.iter().map(|x| -x).collect()
                    } else {
                        dir.clone()
                    };
                    lines.push(GraphLine { point: p0.to_vec(), direction: d, weight, dual })
                }
            }
        }
    }
    edges.sort_by(|a, b| (a.from, a.to, &a.direction).cmp(&(b.from, b.to, &b.direction)));
    rays.sort_by(|a, b| (a.from, &a.direction).cmp(&(b.from, &b.direction)));
    lines.sort_by(|a, b| (&a.direction, &a.point).cmp(&(&b.direction, &b.point)));

    let cells = vertex_sets
        .values()
        .map(|s| {
            let points: Vec<Vec<i64>> = s.iter().map(|&i| terms[i].alpha.clone()).collect();
            let hull = convex_hull(&points);
            DualCell { lattice_area: lattice_area(&hull), hull, points }
        })
        .collect();
    let all: Vec<Vec<i64>> = terms.iter().map(|t| t.alpha.clone()).collect();
    let newton_polygon = convex_hull(&all);
    let dual_subdivision = DualSubdivision { newton_area: lattice_area(&newton_polygon), newton_polygon, cells };

    Ok(BalancedGraph {
        n: 2,
        vertices: vertices.into_iter().map(|v| v.to_vec()).collect(),
        edges,
        rays,
        lines,
        dual_subdivision: Some(dual_subdivision),
    })
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Extreme points of the collinear exponents `S` and the lattice length
/// between them.
fn dual_segment(terms: &[TropicalTerm], s: &[usize]) -> (Vec<Vec<i64>>, u64) {
    let mut pts: Vec<Vec<i64>> = s.iter().map(|&i| terms[i].alpha.clone()).collect();
    pts.sort();
    let (a, b) = (pts[0].clone(), pts[pts.len() - 1].clone());
    let len = gcd_slice(&sub(&b, &a)).unsigned_abs();
    (vec![a, b], len)
}

/// Counter-clockwise convex hull vertices, starting from the smallest point.
pub fn convex_hull(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[i64], a: &[i64], b: &[i64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the Euclidean area of a polygon given by its vertices in order.
pub fn lattice_area(hull: &[Vec<i64>]) -> u64 {
    if hull.len() < 3 {
        return 0;
    }
    let twice: i64 = (0..hull.len())
        .map(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % hull.len()]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    twice.unsigned_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tropical_line() {
        let p = TropicalPolynomial::from_ints(2, &[(0, &[0, 0]), (0, &[1, 0]), (0, &[0, 1])]).unwrap();
        let g = corner_locus(&p).unwrap();
        assert_eq!(g.vertices, vec![vec![rat(0), rat(0)]]);
        let mut dirs: Vec<Vec<i64>> = g.rays.iter().map(|r| r.direction.clone()).collect();
        dirs.sort();
        assert_eq!(dirs, vec![vec![-1, -1], vec![0, 1], vec![1, 0]]);
        assert!(g.rays.iter().all(|r| r.weight == 1));
        assert!(check_balancing(&g).unwrap().balanced);
        let dual = g.dual_subdivision.unwrap();
        assert_eq!(dual.newton_area, 1);
        assert_eq!(dual.cells.len(), 1);
    }

    #[test]
    fn doubled_line() {
        let p = TropicalPolynomial::from_ints(2, &[(0, &[0, 0]), (0, &[2, 0])]).unwrap();
        let g = corner_locus(&p).unwrap();
        assert!(g.vertices.is_empty());
        assert_eq!(g.lines.len(), 1);
        assert_eq!(g.lines[0].weight, 2);
        assert_eq!(g.lines[0].direction, vec![0, 1]);
        assert_eq!(g.lines[0].point, vec![rat(0), rat(0)]);
    }

    #[test]
    fn degenerate_after_merge() {
        let p = TropicalPolynomial::from_ints(2, &[(0, &[1, 0]), (3, &[1, 0])]).unwrap();
        assert!(matches!(corner_locus(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn balancing_examples() {
        let one_ray = BalancedGraph {
            n: 2,
            vertices: vec![vec![rat(0), rat(0)]],
            edges: vec![],
            rays: vec![GraphRay { from: 0, direction: vec![1, 0], weight: 1, dual: vec![] }],
            lines: vec![],
            dual_subdivision: None,
        };
        let r = check_balancing(&one_ray).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.defects, vec![vec![1, 0]]);
        let mut cross = one_ray.clone();
        cross.rays = [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|d| GraphRay { from: 0, direction: d.to_vec(), weight: 1, dual: vec![] })
            .collect();
        assert!(check_balancing(&cross).unwrap().balanced);
        cross.rays[0].direction = vec![2, 0];
        assert!(matches!(check_balancing(&cross), Err(Error::Validation(_))));
    }

    #[test]
    fn conic_with_bounded_edges() {
        // 0 + x + y + 1x^2 + 1xy + 1y^2, weights all one
        let p = TropicalPolynomial::from_ints(
            2,
            &[(0, &[0, 0]), (0, &[1, 0]), (0, &[0, 1]), (1, &[2, 0]), (1, &[1, 1]), (1, &[0, 2])],
        )
        .unwrap();
        let g = corner_locus(&p).unwrap();
        assert!(check_balancing(&g).unwrap().balanced);
        let dual = g.dual_subdivision.as_ref().unwrap();
        assert_eq!(dual.newton_area, 4);
        assert_eq!(dual.cells.iter().map(|c| c.lattice_area).sum::<u64>(), 4);
        assert!(!g.edges.is_empty());
    }
}
