//! Dense integer matrices with Smith and Hermite normal forms.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix {
    rows: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(Error::Validation("ragged integer matrix".into()));
            }
        }
        Ok(IntMatrix { rows })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix { rows: vec![vec![0; ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = 1;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Column count; an empty matrix has zero columns.
    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn transpose(&self) -> IntMatrix {
        let (m, n) = (self.nrows(), self.ncols());
        let mut t = IntMatrix::zeros(n, m);
        for i in 0..m {
            for j in 0..n {
                t.rows[j][i] = self.rows[i][j];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols() != other.nrows() && !(self.nrows() == 0 || other.ncols() == 0) {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let mut out = IntMatrix::zeros(self.nrows(), other.ncols());
        for i in 0..self.nrows() {
            for j in 0..other.ncols() {
                out.rows[i][j] = (0..self.ncols()).map(|k| self.rows[i][k] * other.rows[k][j]).sum();
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Determinant by fraction-free elimination. Square matrices only.
    pub fn determinant(&self) -> Result<i64> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::Usage("determinant of a non-square matrix".into()));
        }
        let mut a: Vec<Vec<i128>> = self.rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        Ok((sign * if n == 0 { 1 } else { a[n - 1][n - 1] }) as i64)
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            r.swap(a, b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for j in 0..self.ncols() {
            self.rows[dst][j] += k * self.rows[src][j];
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for r in &mut self.rows {
            r[dst] += k * r[src];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.rows[i] {
            *x = -*x;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<i64> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d.get(i, i)).take_while(|&x| x != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(nr);
    let mut v = IntMatrix::identity(nc);

    for t in 0..nr.min(nc) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let pivot = (t..nr)
                .flat_map(|i| (t..nc).map(move |j| (i, j)))
                .filter(|&(i, j)| d.get(i, j) != 0)
                .min_by_key(|&(i, j)| (d.get(i, j).abs(), i, j));
            let Some((pi, pj)) = pivot else {
                return SmithForm { u, d, v };
            };
            d.rows.swap(t, pi);
            u.rows.swap(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..nr {
                let q = d.get(i, t).div_euclid(p);
                d.add_row(i, t, -q);
                u.add_row(i, t, -q);
                clean &= d.get(i, t) == 0;
            }
            for j in t + 1..nc {
                let q = d.get(t, j).div_euclid(p);
                d.add_col(j, t, -q);
                v.add_col(j, t, -q);
                clean &= d.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| d.get(i, j) % p != 0));
            match offender {
                Some(i) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Row-style Hermite normal form: echelon rows with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (nr, nc) = (a.nrows(), a.ncols());
    let mut r = 0;
    for col in 0..nc {
        if r == nr {
            break;
        }
        loop {
            let pivot = (r..nr)
                .filter(|&i| a.get(i, col) != 0)
                .min_by_key(|&i| (a.get(i, col).abs(), i));
            let Some(p) = pivot else { break };
            a.rows.swap(r, p);
            let mut done = true;
            for i in r + 1..nr {
                let q = a.get(i, col).div_euclid(a.get(r, col));
                a.add_row(i, r, -q);
                done &= a.get(i, col) == 0;
            }
            if done {
                break;
            }
        }
        if a.get(r, col) == 0 {
            continue;
        }
        if a.get(r, col) < 0 {
            a.negate_row(r);
        }
        let p = a.get(r, col);
        for i in 0..r {
            let q = a.get(i, col).div_euclid(p);
            a.add_row(i, r, -q);
        }
        r += 1;
    }
    a.rows.truncate(r);
    a
}

/// Lattice basis (in Hermite normal form) of `{r in Z^k : r * M = 0}`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let basis: Vec<Vec<i64>> = snf.u.rows()[rank..].to_vec();
    if basis.is_empty() {
        return IntMatrix { rows: Vec::new() };
    }
    hermite_normal_form(&IntMatrix { rows: basis })
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        let prod = s.u.mul(m).unwrap().mul(&s.v).unwrap();
        assert_eq!(prod, s.d, "U M V != D for\n{m}");
        assert_eq!(s.u.determinant().unwrap().abs(), 1);
        assert_eq!(s.v.determinant().unwrap().abs(), 1);
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
        s
    }

    #[test]
    fn smith_examples() {
        assert_eq!(check(&mat(&[&[2]])).d, mat(&[&[2]]));
        assert_eq!(check(&mat(&[&[1, 1], &[1, -1]])).invariant_factors(), vec![1, 2]);
        assert_eq!(check(&IntMatrix::identity(3)).d, IntMatrix::identity(3));
        assert_eq!(check(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).invariant_factors(), vec![2, 6, 12]);
        assert_eq!(check(&mat(&[&[0, 0], &[0, 0]])).rank(), 0);
        check(&mat(&[&[6, 4], &[4, 6], &[2, 2]]));
    }

    #[test]
    fn kernel_of_dual_generators() {
        // (0,1) + (2,-1) - 2 (1,0) = 0
        let g = mat(&[&[0, 1], &[1, 0], &[2, -1]]);
        let k = left_kernel(&g);
        assert_eq!(k.rows(), &[vec![1, -2, 1]]);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = mat(&[&[2, 3], &[4, 7]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h, mat(&[&[2, 0], &[0, 1]]));
        assert_eq!(a.determinant().unwrap(), 2);
    }
}
