use std::collections::HashSet;

use exploded_core::coordmodel::{CoordModel, CoordModelPoint, MonomialMorphism};
use exploded_core::lattice::{IntMatrix, IntegralCone};
use exploded_core::rational::{frac, rat, Rational};
use exploded_core::semiring::{Exploded, ExplodedValue, GaussianRational, Scalar};
use exploded_core::Error;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gauss(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(rat(re), rat(im))
}

fn random_point(rng: &mut ChaCha8Rng, cone: &IntegralCone) -> CoordModelPoint {
    loop {
        let a: Vec<Rational> = (0..cone.m).map(|_| frac(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
        if !cone.contains(&a) {
            continue;
        }
        let z = a
            .into_iter()
            .map(|e| {
                let (mut re, mut im) = (0, 0);
                while re == 0 && im == 0 {
                    re = rng.gen_range(-4..=4);
                    im = rng.gen_range(-4..=4);
                }
                ExplodedValue::Exact(Exploded::new(gauss(re, im), e))
            })
            .collect();
        return CoordModelPoint::new(vec![], z);
    }
}

fn gpow(c: &GaussianRational, k: i64) -> GaussianRational {
    let base = if k < 0 {
        let n = &c.re * &c.re + &c.im * &c.im;
        GaussianRational::new(&c.re / &n, -&c.im / &n)
    } else {
        c.clone()
    };
    (0..k.unsigned_abs()).fold(GaussianRational::one(), |acc, _| acc * base.clone())
}

#[test]
fn binomial_relations_hold_on_smooth_parts() {
    let cones = vec![
        IntegralCone::standard(2, 2).unwrap(),
        IntegralCone::standard(3, 2).unwrap(),
        IntegralCone::new(2, vec![vec![0, 1], vec![2, -1]]).unwrap(),
        IntegralCone::new(2, vec![vec![1, 2], vec![3, -1]]).unwrap(),
        IntegralCone::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, -1], vec![0, 0, 1]]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for cone in cones {
        let model = CoordModel::new(0, cone.clone()).unwrap();
        let hb = &model.dual_basis;
        let mut checked = 0;
        for _ in 0..1000 {
            let p = random_point(&mut rng, &cone);
            let parts = model.point_parts(&p).unwrap();
            let s: Vec<GaussianRational> = parts
                .smooth
                .iter()
                .map(|v| match v {
                    Scalar::Exact(c) => c.clone(),
                    Scalar::Float(_) => unreachable!(),
                })
                .collect();
            // Independent smooth coordinates: coefficient monomial when the pairing vanishes.
            for (g, sj) in hb.generators.iter().zip(&s) {
                let pairing: Rational = g.iter().zip(&parts.tropical).map(|(&gi, a)| a * rat(gi)).sum();
                if pairing.is_zero() {
                    let mut expect = GaussianRational::one();
                    for (zi, &gi) in p.z.iter().zip(g) {
                        expect = expect * gpow(&zi.as_exact().unwrap().coeff, gi);
                    }
                    assert_eq!(*sj, expect);
                } else {
                    assert!(sj.is_zero());
                }
            }
            for r in &hb.relations {
                if r.iter().zip(&s).any(|(&k, sj)| k != 0 && sj.is_zero()) {
                    continue;
                }
                let prod = r.iter().zip(&s).fold(GaussianRational::one(), |acc, (&k, sj)| acc * gpow(sj, k));
                assert_eq!(prod, GaussianRational::one());
                checked += 1;
            }
        }
        assert!(hb.relations.is_empty() || checked > 0);
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => unreachable!(),
    }
}

/// Solutions of z^alpha = 1 in (C*)^n are exp(2 pi i k / N) with
/// alpha k = 0 mod N, N = |det alpha|.
fn count_roots(m: &[Vec<i64>]) -> i64 {
    let n = det(m).abs();
    let dim = m.len();
    let mut count = 0;
    let total = n.pow(dim as u32);
    for idx in 0..total {
        let k: Vec<i64> = (0..dim).map(|i| (idx / n.pow(i as u32)) % n).collect();
        if m.iter().all(|row| row.iter().zip(&k).map(|(a, b)| a * b).sum::<i64>().rem_euclid(n) == 0) {
            count += 1;
        }
    }
    count
}

#[test]
fn multiplicity_counts_roots_of_unity() {
    let mut square = Vec::new();
    for a in -3..=3 {
        square.push(vec![vec![a]]);
    }
    for a in -3..=3 {
        for b in -3..=3 {
            for c in -3..=3 {
                for d in -3..=3 {
                    square.push(vec![vec![a, b], vec![c, d]]);
                }
            }
        }
    }
    for m in square {
        let f = MonomialMorphism::from_rows(m.clone()).unwrap();
        let cone = IntegralCone::whole_space(m.len());
        match f.fiber_multiplicity(&cone) {
            Ok(fm) => assert_eq!(fm.multiplicity, count_roots(&m), "{m:?}"),
            Err(Error::Rank(_)) => assert_eq!(det(&m), 0),
            Err(e) => panic!("{e}"),
        }
    }
}

/// The subgroup of (Z/p)^rows generated by the columns.
fn image_mod(m: &[Vec<i64>], p: i64) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut frontier = vec![vec![0; rows]];
    seen.insert(vec![0; rows]);
    while let Some(v) = frontier.pop() {
        for j in 0..cols {
            let w: Vec<i64> = (0..rows).map(|i| (v[i] + m[i][j]).rem_euclid(p)).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen.len()
}

proptest! {
    #[test]
    fn family_condition_matches_modular_surjectivity(
        rows in 1usize..=2, cols in 1usize..=3,
        entries in proptest::collection::vec(-3i64..=3, 6)
    ) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * 3..i * 3 + cols].to_vec()).collect();
        let f = MonomialMorphism::from_rows(m.clone()).unwrap();
        let onto = [2i64, 3, 5, 7, 11, 13, 17].iter().all(|&p| image_mod(&m, p) == (p as usize).pow(rows as u32));
        prop_assert_eq!(f.check_family_condition(), onto);
    }

    #[test]
    fn tropical_part_commutes_with_morphisms(
        entries in proptest::collection::vec(-3i64..=3, 6),
        shifts in proptest::collection::vec(-4i64..=4, 2),
        exps in proptest::collection::vec((-6i64..=6, 1i64..=3), 3),
        coeffs in proptest::collection::vec((1i64..=5, -2i64..=2), 3),
    ) {
        let alpha = IntMatrix::from_rows(vec![entries[..3].to_vec(), entries[3..].to_vec()]).unwrap();
        let consts = shifts.iter().map(|&s| ExplodedValue::Exact(Exploded::new(gauss(2, 1), frac(s, 2)))).collect();
        let f = MonomialMorphism::new(alpha, consts, None).unwrap();
        let z: Vec<ExplodedValue> = exps
            .iter()
            .zip(&coeffs)
            .map(|(&(n, d), &(re, im))| ExplodedValue::Exact(Exploded::new(gauss(re, im), frac(n, d))))
            .collect();
        let p = CoordModelPoint::new(vec![], z);
        let image = f.apply(&p).unwrap();
        let a = p.tropical();
        for (j, row) in entries.chunks(3).enumerate() {
            let expect: Rational = row.iter().zip(&a).map(|(&k, x)| x * rat(k)).sum::<Rational>() + frac(shifts[j], 2);
            prop_assert_eq!(image.z[j].exponent(), &expect);
        }
    }
}
