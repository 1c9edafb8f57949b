use exploded_core::rational::{frac, rat, Rational};
use exploded_core::tropcurve::{check_balancing, corner_locus, BalancedGraph, TropicalPolynomial, TropicalTerm};
use num_integer::Integer;
use proptest::prelude::*;

fn poly_strategy() -> impl Strategy<Value = TropicalPolynomial> {
    proptest::collection::vec(((-3i64..=3, -3i64..=3), (-6i64..=6, 1i64..=2)), 2..=6).prop_map(|terms| {
        TropicalPolynomial::new(
            2,
            terms.into_iter().map(|((a, b), (n, d))| TropicalTerm::new(frac(n, d), vec![a, b])).collect(),
        )
        .unwrap()
    })
}

fn min_set(p: &TropicalPolynomial, a: &[Rational]) -> Vec<Vec<i64>> {
    let vals: Vec<Rational> = p.terms.iter().map(|t| &t.y + &a[0] * rat(t.alpha[0]) + &a[1] * rat(t.alpha[1])).collect();
    let m = vals.iter().min().unwrap().clone();
    let mut s: Vec<Vec<i64>> = p.terms.iter().zip(&vals).filter(|(_, v)| **v == m).map(|(t, _)| t.alpha.clone()).collect();
    s.sort();
    s.dedup();
    s
}

fn lattice_length(s: &[Vec<i64>]) -> u64 {
    let a = &s[0];
    let b = &s[s.len() - 1];
    (b[0] - a[0]).gcd(&(b[1] - a[1])) as u64
}

/// Whether `a` lies on a segment, ray or line of the graph.
fn on_graph(g: &BalancedGraph, a: &[Rational]) -> bool {
    let on = |start: &[Rational], dir: &[i64], lo: Option<Rational>, hi: Option<Rational>| {
        let d = [rat(dir[0]), rat(dir[1])];
        let off = [&a[0] - &start[0], &a[1] - &start[1]];
        if &off[0] * &d[1] - &off[1] * &d[0] != rat(0) {
            return false;
        }
        let t = (&off[0] * &d[0] + &off[1] * &d[1]) / (&d[0] * &d[0] + &d[1] * &d[1]);
        lo.is_none_or(|l| t >= l) && hi.is_none_or(|h| t <= h)
    };
    g.vertices.iter().any(|v| v.as_slice() == a)
        || g.edges.iter().any(|e| {
            let (p, q) = (&g.vertices[e.from], &g.vertices[e.to]);
            let d = [rat(e.direction[0]), rat(e.direction[1])];
            let len = if d[0] != rat(0) { (&q[0] - &p[0]) / &d[0] } else { (&q[1] - &p[1]) / &d[1] };
            on(p, &e.direction, Some(rat(0)), Some(len))
        })
        || g.rays.iter().any(|r| on(&g.vertices[r.from], &r.direction, Some(rat(0)), None))
        || g.lines.iter().any(|l| on(&l.point, &l.direction, None, None))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn loci_are_balanced_and_dual(p in poly_strategy()) {
        let Ok(g) = corner_locus(&p) else { return Ok(()) };
        let report = check_balancing(&g).unwrap();
        prop_assert!(report.balanced, "{:?}", report.defects);
        let dual = g.dual_subdivision.as_ref().unwrap();
        prop_assert_eq!(dual.cells.iter().map(|c| c.lattice_area).sum::<u64>(), dual.newton_area);
        for e in &g.edges {
            let u = [e.dual[1][0] - e.dual[0][0], e.dual[1][1] - e.dual[0][1]];
            prop_assert_eq!(u[0] * e.direction[0] + u[1] * e.direction[1], 0);
        }
    }

    #[test]
    fn locus_matches_achieving_sets(p in poly_strategy()) {
        let Ok(g) = corner_locus(&p) else { return Ok(()) };
        for i in -12..=12 {
            for j in -12..=12 {
                let a = [frac(i, 2), frac(j, 2)];
                let s = min_set(&p, &a);
                prop_assert_eq!(s.len() >= 2, on_graph(&g, &a), "at {:?}", a);
            }
        }
        for e in &g.edges {
            let (p0, q0) = (&g.vertices[e.from], &g.vertices[e.to]);
            let mid = [(&p0[0] + &q0[0]) / rat(2), (&p0[1] + &q0[1]) / rat(2)];
            let s = min_set(&p, &mid);
            prop_assert!(s.len() >= 2);
            prop_assert_eq!(e.weight, lattice_length(&s));
        }
        for r in &g.rays {
            let v = &g.vertices[r.from];
            let a = [&v[0] + rat(r.direction[0]), &v[1] + rat(r.direction[1])];
            prop_assert_eq!(r.weight, lattice_length(&min_set(&p, &a)));
        }
    }

    #[test]
    fn evaluation_is_concave(
        p in poly_strategy(),
        a in proptest::collection::vec(-20i64..=20, 2),
        b in proptest::collection::vec(-20i64..=20, 2),
        lam in 1i64..=9,
    ) {
        let l = frac(lam, 10);
        let a: Vec<Rational> = a.iter().map(|&x| frac(x, 3)).collect();
        let b: Vec<Rational> = b.iter().map(|&x| frac(x, 3)).collect();
        let mix: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| &l * x + (rat(1) - &l) * y).collect();
        let lhs = p.eval(&mix).unwrap().exponent;
        let rhs = &l * p.eval(&a).unwrap().exponent + (rat(1) - &l) * p.eval(&b).unwrap().exponent;
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn monomial_shift_leaves_locus(p in poly_strategy(), c in -5i64..=5, beta in proptest::collection::vec(-3i64..=3, 2)) {
        let Ok(g) = corner_locus(&p) else { return Ok(()) };
        let h = corner_locus(&p.shifted(&rat(c), &beta)).unwrap();
        prop_assert_eq!(&g.vertices, &h.vertices);
        let strip = |g: &BalancedGraph| -> Vec<(usize, usize, Vec<i64>, u64)> {
            g.edges.iter().map(|e| (e.from, e.to, e.direction.clone(), e.weight)).collect()
        };
        prop_assert_eq!(strip(&g), strip(&h));
        let rays = |g: &BalancedGraph| -> Vec<(usize, Vec<i64>, u64)> {
            g.rays.iter().map(|r| (r.from, r.direction.clone(), r.weight)).collect()
        };
        prop_assert_eq!(rays(&g), rays(&h));
    }
}
