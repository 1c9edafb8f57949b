//! Exact rational polyhedra: feasibility with witnesses by Fourier–Motzkin
//! elimination, implicit equalities, dimension and containment.
//!
//! Sizes in this crate stay small (dimension at most four, a few dozen
//! constraints), where elimination with duplicate pruning is fast and, unlike
//! a floating-point LP, exact.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `expr = 0`
    Eq,
    /// `expr >= 0`
    Ge,
    /// `expr > 0`
    Gt,
}

/// `coeffs . x + constant  REL  0`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub rel: Relation,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, constant: Rational, rel: Relation) -> Self {
        LinearConstraint { coeffs, constant, rel }
    }

    pub fn from_ints(coeffs: &[i64], constant: Rational, rel: Relation) -> Self {
        LinearConstraint::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), constant, rel)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.eval(x);
        match self.rel {
            Relation::Eq => v.is_zero(),
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn trivially_holds(&self) -> bool {
        match self.rel {
            Relation::Eq => self.constant.is_zero(),
            Relation::Ge => !self.constant.is_negative(),
            Relation::Gt => self.constant.is_positive(),
        }
    }

    /// Scales by a positive factor so the largest coefficient has magnitude one.
    fn normalized(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .filter(|m| !m.is_zero());
        if let Some(s) = scale {
            for c in &mut self.coeffs {
                *c = &*c / &s;
            }
            self.constant = &self.constant / &s;
            if self.rel == Relation::Eq {
                if let Some(first) = self.coeffs.iter().find(|c| !c.is_zero()) {
                    if first.is_negative() {
                        for c in &mut self.coeffs {
                            *c = -&*c;
                        }
                        self.constant = -&self.constant;
                    }
                }
            }
        }
        self
    }

    fn without(&self, j: usize) -> LinearConstraint {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(j);
        LinearConstraint::new(coeffs, self.constant.clone(), self.rel)
    }

    /// The negation of an inequality (`>= 0` becomes `< 0`, i.e. `-expr > 0`).
    pub fn violated(&self) -> Option<LinearConstraint> {
        let neg = |rel| {
            LinearConstraint::new(
                self.coeffs.iter().map(|c| -c).collect(),
                -&self.constant,
                rel,
            )
        };
        match self.rel {
            Relation::Ge => Some(neg(Relation::Gt)),
            Relation::Gt => Some(neg(Relation::Ge)),
            Relation::Eq => None,
        }
    }

    pub fn as_equality(&self) -> LinearConstraint {
        LinearConstraint::new(self.coeffs.clone(), self.constant.clone(), Relation::Eq)
    }
}

/// Drops duplicates and, among constraints with equal coefficients, keeps the
/// tightest one.
fn prune(cons: Vec<LinearConstraint>) -> Option<Vec<LinearConstraint>> {
    let mut by_coeffs: BTreeMap<Vec<Rational>, Vec<LinearConstraint>> = BTreeMap::new();
    for c in cons {
        let c = c.normalized();
        if c.is_trivial() {
            if !c.trivially_holds() {
                return None;
            }
            continue;
        }
        by_coeffs.entry(c.coeffs.clone()).or_default().push(c);
    }
    let mut out = Vec::new();
    for (_, group) in by_coeffs {
        let mut eqs: Vec<LinearConstraint> = group.iter().filter(|c| c.rel == Relation::Eq).cloned().collect();
        eqs.dedup_by(|a, b| a.constant == b.constant);
        if eqs.len() > 1 {
            return None;
        }
        out.extend(eqs);
        // For `a.x + k >= 0` the smallest k is tightest; strict wins ties.
        let tightest = group
            .into_iter()
            .filter(|c| c.rel != Relation::Eq)
            .min_by(|a, b| {
                a.constant
                    .cmp(&b.constant)
                    .then_with(|| (b.rel == Relation::Gt).cmp(&(a.rel == Relation::Gt)))
            });
        out.extend(tightest);
    }
    Some(out)
}

/// Finds a point satisfying every constraint, or `None` if there is none.
pub fn feasible_point(dim: usize, constraints: &[LinearConstraint]) -> Option<Vec<Rational>> {
    debug_assert!(constraints.iter().all(|c| c.coeffs.len() == dim));
    solve(dim, constraints.to_vec())
}

fn solve(dim: usize, cons: Vec<LinearConstraint>) -> Option<Vec<Rational>> {
    let cons = prune(cons)?;
    if dim == 0 {
        return Some(Vec::new());
    }

    if let Some(eq) = cons.iter().find(|c| c.rel == Relation::Eq).cloned() {
        let j = eq.coeffs.iter().rposition(|c| !c.is_zero()).expect("nontrivial equality");
        let pivot = eq.coeffs[j].clone();
        let reduced: Vec<LinearConstraint> = cons
            .iter()
            .filter(|c| **c != eq)
            .map(|c| {
                let f = &c.coeffs[j] / &pivot;
                let coeffs = c.coeffs.iter().zip(&eq.coeffs).map(|(a, b)| a - &f * b).collect();
                LinearConstraint::new(coeffs, &c.constant - &f * &eq.constant, c.rel).without(j)
            })
            .collect();
        let mut y = solve(dim - 1, reduced)?;
        let rest = eq.without(j).eval(&y);
        y.insert(j, -rest / pivot);
        return Some(y);
    }

    let j = dim - 1;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut next = Vec::new();
    for c in &cons {
        if c.coeffs[j].is_positive() {
            lower.push(c.clone());
        } else if c.coeffs[j].is_negative() {
            upper.push(c.clone());
        } else {
            next.push(c.without(j));
        }
    }
    for p in &lower {
        for n in &upper {
            let sp = p.coeffs[j].abs();
            let sn = n.coeffs[j].abs();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| a / &sp + b / &sn)
                .collect();
            let rel = if p.rel == Relation::Gt || n.rel == Relation::Gt {
                Relation::Gt
            } else {
                Relation::Ge
            };
            let combined =
                LinearConstraint::new(coeffs, &p.constant / &sp + &n.constant / &sn, rel);
            next.push(combined.without(j));
        }
    }
    let mut y = solve(dim - 1, next)?;

    // x_j >= bound (lower) or x_j <= bound (upper), possibly strict.
    let bound = |c: &LinearConstraint, y: &[Rational]| -> (Rational, bool) {
        let rest = c.without(j).eval(y);
        (-rest / &c.coeffs[j], c.rel == Relation::Gt)
    };
    let lo = lower
        .iter()
        .map(|c| bound(c, &y))
        .max_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let hi = upper
        .iter()
        .map(|c| bound(c, &y))
        .min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let one = Rational::one();
    let xj = match (lo, hi) {
        (Some((l, _)), Some((h, _))) if l == h => l,
        (Some((l, _)), Some((h, _))) => (l + h) / Rational::from_integer(2.into()),
        (Some((l, strict)), None) => if strict { l + one } else { l },
        (None, Some((h, strict))) => if strict { h - one } else { h },
        (None, None) => Rational::zero(),
    };
    y.push(xj);
    Some(y)
}

/// A polyhedron given by linear constraints (possibly with strict ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub dim: usize,
    pub constraints: Vec<LinearConstraint>,
}

impl Polyhedron {
    pub fn new(dim: usize, constraints: Vec<LinearConstraint>) -> Self {
        Polyhedron { dim, constraints }
    }

    pub fn whole_space(dim: usize) -> Self {
        Polyhedron::new(dim, Vec::new())
    }

    pub fn point(&self) -> Option<Vec<Rational>> {
        feasible_point(self.dim, &self.constraints)
    }

    pub fn is_empty(&self) -> bool {
        self.point().is_none()
    }

    pub fn with(&self, extra: impl IntoIterator<Item = LinearConstraint>) -> Polyhedron {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra);
        Polyhedron::new(self.dim, constraints)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        self.with(other.constraints.iter().cloned())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }

    /// `other` is a subset of `self`.
    pub fn contains_set(&self, other: &Polyhedron) -> bool {
        self.constraints.iter().all(|c| match c.violated() {
            Some(v) => other.with([v]).is_empty(),
            None => {
                let ge = LinearConstraint::new(c.coeffs.clone(), c.constant.clone(), Relation::Ge);
                [ge.clone(), LinearConstraint::new(ge.coeffs.iter().map(|x| -x).collect(), -&ge.constant, Relation::Ge)]
                    .iter()
                    .all(|g| other.with(g.violated()).is_empty())
            }
        })
    }

    pub fn set_eq(&self, other: &Polyhedron) -> bool {
        self.contains_set(other) && other.contains_set(self)
    }

    /// Inequalities that hold with equality on the whole (nonempty) set.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| match c.rel {
                Relation::Eq => true,
                Relation::Gt => false,
                Relation::Ge => {
                    let strict = LinearConstraint::new(c.coeffs.clone(), c.constant.clone(), Relation::Gt);
                    self.with([strict]).is_empty()
                }
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Dimension of the affine hull, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.point()?;
        let rows: Vec<Vec<Rational>> = self
            .implicit_equalities()
            .into_iter()
            .map(|i| self.constraints[i].coeffs.clone())
            .collect();
        Some(self.dim - rank(&rows))
    }
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    row_echelon(rows).len()
}

/// Nonzero rows of a reduced row echelon form.
pub fn row_echelon(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for x in &mut m[r] {
            *x = &*x / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Basis of `{x : rows . x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let rref = row_echelon(rows);
    let pivots: Vec<usize> = rref
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in rref.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}
