use std::collections::{BTreeSet, HashMap};

use exploded_core::lattice::{
    left_kernel, smith_normal_form, ExplodedPolygon, IntMatrix, IntegralCone,
};
use exploded_core::polyhedron::rank;
use exploded_core::rational::rat;
use exploded_core::Error;
use proptest::prelude::*;

fn det2(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Membership in cone(g1, g2) by Cramer's rule.
fn in_dual(g1: [i64; 2], g2: [i64; 2], x: [i64; 2]) -> bool {
    let gens: Vec<[i64; 2]> = [g1, g2].into_iter().filter(|g| *g != [0, 0]).collect();
    match gens.len() {
        0 => x == [0, 0],
        1 => det2(x, gens[0]) == 0 && x[0] * gens[0][0] + x[1] * gens[0][1] >= 0,
        _ => {
            let d = det2(g1, g2);
            if d == 0 {
                gens.iter().all(|g| det2(x, *g) == 0 && x[0] * g[0] + x[1] * g[1] >= 0)
            } else {
                let l1 = det2(x, g2) * d.signum();
                let l2 = det2(g1, x) * d.signum();
                l1 >= 0 && l2 >= 0
            }
        }
    }
}

fn representable(
    x: [i64; 2],
    gens: &[[i64; 2]],
    member: &dyn Fn([i64; 2]) -> bool,
    memo: &mut HashMap<[i64; 2], bool>,
) -> bool {
    if x == [0, 0] {
        return true;
    }
    if let Some(&v) = memo.get(&x) {
        return v;
    }
    let ok = gens.iter().any(|g| {
        let rest = [x[0] - g[0], x[1] - g[1]];
        member(rest) && representable(rest, gens, member, memo)
    });
    memo.insert(x, ok);
    ok
}

/// Irreducible lattice points of a pointed 2D cone, by searching every
/// splitting x = y + (x - y).
fn brute_force_basis(g1: [i64; 2], g2: [i64; 2]) -> BTreeSet<Vec<i64>> {
    let member = |x: [i64; 2]| in_dual(g1, g2, x);
    let mut out = BTreeSet::new();
    for a in -12..=12i64 {
        for b in -12..=12i64 {
            let x = [a, b];
            if x == [0, 0] || !member(x) {
                continue;
            }
            let r = 40;
            let reducible = (-r..=r).any(|p| {
                (-r..=r).any(|q| {
                    let y = [p, q];
                    y != [0, 0] && y != x && member(y) && member([a - p, b - q])
                })
            });
            if !reducible {
                out.insert(x.to_vec());
            }
        }
    }
    out
}

#[test]
fn skew_cone_matches_brute_force() {
    let cone = IntegralCone::new(2, vec![vec![0, 1], vec![2, -1]]).unwrap();
    let hb = cone.dual_cone_hilbert_basis().unwrap();
    let got: BTreeSet<Vec<i64>> = hb.generators.iter().cloned().collect();
    assert_eq!(got, brute_force_basis([0, 1], [2, -1]));
}

#[test]
fn all_small_planar_cones() {
    let mut checked = 0;
    for a in -3..=3i64 {
        for b in -3..=3i64 {
            for c in -3..=3i64 {
                for d in -3..=3i64 {
                    let (g1, g2) = ([a, b], [c, d]);
                    let cone = IntegralCone::new(2, vec![g1.to_vec(), g2.to_vec()]).unwrap();
                    let hb = match cone.dual_cone_hilbert_basis() {
                        Ok(hb) => hb,
                        Err(Error::Validation(_)) => {
                            assert!(det2(g1, g2) == 0 && g1 != [0, 0] && g2 != [0, 0]);
                            continue;
                        }
                        Err(e) => panic!("{e}"),
                    };
                    let gens: Vec<[i64; 2]> = hb.generators.iter().map(|v| [v[0], v[1]]).collect();
                    let member = |x: [i64; 2]| in_dual(g1, g2, x);
                    let mut memo = HashMap::new();
                    for x in -10..=10 {
                        for y in -10..=10 {
                            if member([x, y]) {
                                assert!(representable([x, y], &gens, &member, &mut memo), "{g1:?} {g2:?} at {x},{y}");
                            }
                        }
                    }
                    for i in 0..gens.len() {
                        let others: Vec<[i64; 2]> =
                            gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| *g).collect();
                        assert!(!representable(gens[i], &others, &member, &mut HashMap::new()));
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 2000);
}

#[test]
fn cone_face_examples() {
    let quadrant = IntegralCone::standard(2, 2).unwrap();
    let faces = quadrant.faces().unwrap();
    assert_eq!(faces.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![0, 1, 1, 2]);
    assert_eq!(quadrant.zero_stratum().unwrap().dim, 0);
    assert_eq!(IntegralCone::whole_space(2).faces().unwrap().len(), 1);
    let half = IntegralCone::new(2, vec![vec![0, 1]]).unwrap();
    assert_eq!(half.faces().unwrap().len(), 2);
}

#[test]
fn local_cones_of_square() {
    let sq = ExplodedPolygon::closed_box(&[(rat(0), rat(1)), (rat(0), rat(1))]);
    for s in sq.strata().unwrap() {
        let cone = sq.local_cone_at(&s).unwrap();
        // Points near the sample are in P exactly when the offset is in the cone.
        let eps = exploded_core::rational::frac(1, 100);
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                let off = [rat(dx) * &eps, rat(dy) * &eps];
                let q = [&s.sample[0] + &off[0], &s.sample[1] + &off[1]];
                assert_eq!(sq.contains(&q), cone.contains(&off));
            }
        }
    }
    let interior = sq.strata().unwrap().pop().unwrap();
    assert!(sq.local_cone_at(&interior).unwrap().ineqs.is_empty());
}

fn small_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r)
            .prop_map(|rows| IntMatrix::from_rows(rows).unwrap())
    })
}

proptest! {
    #[test]
    fn smith_reconstructs(m in small_matrix(4)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.determinant().unwrap().abs(), 1);
        prop_assert_eq!(s.v.determinant().unwrap().abs(), 1);
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        if m.nrows() == m.ncols() {
            let prod: i64 = if f.len() == m.nrows() { f.iter().product() } else { 0 };
            prop_assert_eq!(m.determinant().unwrap().abs(), prod);
        }
    }

    #[test]
    fn kernel_lattice_is_saturated(m in small_matrix(4)) {
        let k = left_kernel(&m);
        let rows: Vec<Vec<_>> = m.rows().iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        prop_assert_eq!(k.nrows(), m.nrows() - rank(&rows));
        for r in k.rows() {
            prop_assert!(m.transpose().apply(r).iter().all(|&x| x == 0));
        }
        if k.nrows() > 0 {
            // A saturated sublattice has all invariant factors 1.
            prop_assert!(smith_normal_form(&k).invariant_factors().iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn strata_dimensions_match_tight_rank(
        ineqs in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 0..5)
    ) {
        let cone = IntegralCone::new(3, ineqs).unwrap();
        let faces = cone.faces().unwrap();
        for s in &faces {
            let rows: Vec<Vec<_>> = s.tight.iter().map(|&i| cone.ineqs[i].iter().map(|&x| rat(x)).collect()).collect();
            prop_assert_eq!(s.dim + rank(&rows), 3);
            prop_assert!(cone.contains(&s.sample));
        }
        // The closure of the intersection of two faces is again a face closure.
        let poly = cone.as_polygon();
        let closures: Vec<ExplodedPolygon> = faces.iter().map(|s| poly.face(s)).collect();
        for a in &closures {
            for b in &closures {
                let meet = a.intersect(b);
                prop_assert!(closures.iter().any(|c| c.set_eq(&meet)));
            }
        }
    }

    #[test]
    fn hilbert_relations_in_kernel(
        ineqs in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 3)
    ) {
        let cone = IntegralCone::new(3, ineqs).unwrap();
        if let Ok(hb) = cone.dual_cone_hilbert_basis() {
            for r in &hb.relations {
                for k in 0..3 {
                    let s: i64 = r.iter().zip(&hb.generators).map(|(c, g)| c * g[k]).sum();
                    prop_assert_eq!(s, 0);
                }
            }
            for g in &hb.generators {
                prop_assert!(cone.ineqs.is_empty() || hb.dual_cone().contains(g));
            }
        }
    }
}
