//! Intersections of corner loci as complexes of relatively open cells.

use serde::Serialize;

use super::{TropicalPolynomial, TropicalTerm};
use crate::error::{Error, Result};
use crate::lattice::combinations;
use crate::polyhedron::{feasible_point, rank, LinearConstraint, Relation};
use crate::rational::{serde_rational_vec, Rational};

pub const MAX_PREVARIETY_DIM: usize = 3;
const MAX_TERMS: usize = 12;

/// A relatively open cell on which every polynomial has a fixed achieving
/// set of size at least two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrevarietyCell {
    /// Achieving exponents, one list per polynomial.
    pub achieving: Vec<Vec<Vec<i64>>>,
    pub dim: usize,
    #[serde(with = "serde_rational_vec")]
    pub sample: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prevariety {
    pub n: usize,
    /// Dimension of the largest cell, `None` when the intersection is empty.
    pub dimension: Option<usize>,
    pub cells: Vec<PrevarietyCell>,
}

/// Constraints cutting out the open region where exactly `set` achieves the
/// minimum.
fn region(terms: &[TropicalTerm], set: &[usize]) -> Vec<LinearConstraint> {
    let base = &terms[set[0]];
    terms
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != set[0])
        .map(|(i, t)| {
            let coeffs: Vec<i64> = t.alpha.iter().zip(&base.alpha).map(|(a, b)| a - b).collect();
            let rel = if set.contains(&i) { Relation::Eq } else { Relation::Gt };
            LinearConstraint::from_ints(&coeffs, &t.y - &base.y, rel)
        })
        .collect()
}

pub fn prevariety(polys: &[TropicalPolynomial]) -> Result<Prevariety> {
    let Some(first) = polys.first() else {
        return Err(Error::Usage("prevariety needs at least one polynomial".into()));
    };
    let n = first.n;
    if polys.iter().any(|p| p.n != n) {
        return Err(Error::Validation("polynomials have different numbers of variables".into()));
    }
    if n > MAX_PREVARIETY_DIM {
        return Err(Error::Capability(format!("prevarieties are computed for n <= {MAX_PREVARIETY_DIM}, got {n}")));
    }
    let merged: Vec<Vec<TropicalTerm>> = polys.iter().map(|p| p.merged().terms).collect();
    if let Some(big) = merged.iter().find(|t| t.len() > MAX_TERMS) {
        return Err(Error::Capability(format!("at most {MAX_TERMS} distinct terms per polynomial, got {}", big.len())));
    }

    // Realizable achieving sets of size >= 2 for each polynomial.
    let mut options: Vec<Vec<(Vec<usize>, Vec<LinearConstraint>)>> = Vec::new();
    for terms in &merged {
        let mut opts = Vec::new();
        for size in 2..=terms.len() {
            for set in combinations(terms.len(), size) {
                let cons = region(terms, &set);
                if feasible_point(n, &cons).is_some() {
                    opts.push((set, cons));
                }
            }
        }
        options.push(opts);
    }

    let mut cells = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    search(n, &merged, &options, &mut chosen, &mut Vec::new(), &mut cells);
    cells.sort_by(|a: &PrevarietyCell, b| (a.dim, &a.achieving).cmp(&(b.dim, &b.achieving)));
    let dimension = cells.iter().map(|c| c.dim).max();
    Ok(Prevariety { n, dimension, cells })
}

fn search(
    n: usize,
    merged: &[Vec<TropicalTerm>],
    options: &[Vec<(Vec<usize>, Vec<LinearConstraint>)>],
    chosen: &mut Vec<usize>,
    acc: &mut Vec<LinearConstraint>,
    out: &mut Vec<PrevarietyCell>,
) {
    let depth = chosen.len();
    let Some(sample) = feasible_point(n, acc) else { return };
    if depth == options.len() {
        let eq_rows: Vec<Vec<Rational>> =
            acc.iter().filter(|c| c.rel == Relation::Eq).map(|c| c.coeffs.clone()).collect();
        let achieving = chosen
            .iter()
            .enumerate()
            .map(|(k, &o)| options[k][o].0.iter().map(|&i| merged[k][i].alpha.clone()).collect())
            .collect();
        out.push(PrevarietyCell { achieving, dim: n - rank(&eq_rows), sample });
        return;
    }
    for (o, (_, cons)) in options[depth].iter().enumerate() {
        let mark = acc.len();
        acc.extend(cons.iter().cloned());
        chosen.push(o);
        search(n, merged, options, chosen, acc, out);
        chosen.pop();
        acc.truncate(mark);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropcurve::corner_locus;

    fn p(n: usize, terms: &[(i64, &[i64])]) -> TropicalPolynomial {
        TropicalPolynomial::from_ints(n, terms).unwrap()
    }

    #[test]
    fn single_plane_polynomial_matches_locus() {
        let line = p(2, &[(0, &[0, 0]), (0, &[1, 0]), (0, &[0, 1])]);
        let pv = prevariety(&[line.clone()]).unwrap();
        let g = corner_locus(&line).unwrap();
        assert_eq!(pv.cells.len(), g.vertices.len() + g.edges.len() + g.rays.len() + g.lines.len());
        assert_eq!(pv.dimension, Some(1));
    }

    #[test]
    fn space_examples() {
        let plane = p(3, &[(0, &[0, 0, 0]), (0, &[1, 0, 0]), (0, &[0, 1, 0]), (0, &[0, 0, 1])]);
        let wall = p(3, &[(0, &[0, 0, 0]), (0, &[1, 0, 0])]);
        // The wall a1 = 0 contains a 2-dimensional piece of the tropical plane.
        assert_eq!(prevariety(&[plane.clone(), wall]).unwrap().dimension, Some(2));
        let shifted = p(3, &[(1, &[0, 0, 0]), (0, &[1, 0, 0])]);
        assert_eq!(prevariety(&[plane.clone(), shifted]).unwrap().dimension, Some(1));
        let same = prevariety(&[plane.clone(), plane.clone()]).unwrap();
        let once = prevariety(&[plane]).unwrap();
        assert_eq!(same.cells.len(), once.cells.len());
        assert_eq!(same.dimension, Some(2));
        let four = p(4, &[(0, &[0, 0, 0, 0]), (0, &[1, 0, 0, 0])]);
        assert!(matches!(prevariety(&[four]), Err(Error::Capability(_))));
    }
}
