use exploded_core::coordmodel::{CoordModel, CoordModelPoint, ExplodedMonomialFunction, MonomialMorphism, SmoothExpr};
use exploded_core::lattice::{is_complete_complex, ExplodedPolygon, IntegralCone, PolygonConstraint};
use exploded_core::rational::{frac, rat, Rational};
use exploded_core::refinement::{pullback_refinement, refine_model, validate_subdivision, Subdivision};
use exploded_core::semiring::{Exploded, ExplodedValue, GaussianRational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cone(ineqs: &[&[i64]]) -> IntegralCone {
    IntegralCone::new(ineqs[0].len(), ineqs.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn cases() -> Vec<(CoordModel, Subdivision)> {
    let quadrant = IntegralCone::standard(2, 2).unwrap();
    let plane = IntegralCone::whole_space(2);
    let line = IntegralCone::whole_space(1);
    let quadrants: Vec<IntegralCone> =
        [[1, 1], [1, -1], [-1, 1], [-1, -1]].iter().map(|s| cone(&[&[s[0], 0], &[0, s[1]]])).collect();
    vec![
        (
            CoordModel::new(0, quadrant.clone()).unwrap(),
            Subdivision::of_cones(&quadrant, &[cone(&[&[0, 1], &[1, -1]]), cone(&[&[1, 0], &[-1, 1]])]).unwrap(),
        ),
        (
            CoordModel::new(1, line.clone()).unwrap(),
            Subdivision::of_cones(&line, &[cone(&[&[-1]]), cone(&[&[1]])]).unwrap(),
        ),
        (CoordModel::new(0, plane.clone()).unwrap(), Subdivision::of_cones(&plane, &quadrants).unwrap()),
        (
            CoordModel::new(0, quadrant.clone()).unwrap(),
            Subdivision::of_cones(
                &quadrant,
                &[cone(&[&[0, 1], &[1, -2]]), cone(&[&[-1, 2], &[2, -1]]), cone(&[&[1, 0], &[-2, 1]])],
            )
            .unwrap(),
        ),
    ]
}

fn random_point(rng: &mut ChaCha8Rng, model: &CoordModel) -> CoordModelPoint {
    loop {
        let a: Vec<Rational> = (0..model.m()).map(|_| frac(rng.gen_range(-4..=4), rng.gen_range(1..=2))).collect();
        if !model.cone.contains(&a) {
            continue;
        }
        let z = a
            .into_iter()
            .map(|e| {
                let c = GaussianRational::new(rat(rng.gen_range(1..=5)), rat(rng.gen_range(-3..=3)));
                ExplodedValue::Exact(Exploded::new(c, e))
            })
            .collect();
        let x = (0..model.n).map(|_| frac(rng.gen_range(-9..=9), 4)).collect();
        return CoordModelPoint::new(x, z);
    }
}

/// First piece whose inequalities hold, evaluated directly.
fn first_piece(s: &Subdivision, a: &[Rational]) -> usize {
    s.pieces
        .iter()
        .position(|p| {
            p.constraints().iter().all(|k| {
                let v: Rational = k.alpha.iter().zip(a).map(|(&x, y)| y * rat(x)).sum::<Rational>() + &k.c;
                v >= rat(0)
            })
        })
        .unwrap()
}

#[test]
fn lifting_is_a_bijection_on_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (model, s) in cases() {
        assert!(validate_subdivision(&s).unwrap().valid);
        let r = refine_model(&model, &s).unwrap();
        let mut lifted = Vec::new();
        let mut points = Vec::new();
        for _ in 0..1000 {
            let p = random_point(&mut rng, &model);
            let q = r.lift_point(&p).unwrap();
            assert_eq!(q.piece, first_piece(&s, &p.tropical()));
            assert_eq!(r.project(&q).unwrap(), p);
            points.push(p);
            lifted.push(q);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] != points[j] {
                    assert_ne!(lifted[i], lifted[j]);
                }
            }
        }
    }
}

#[test]
fn function_values_commute_with_lifting() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (model, s) in cases() {
        let r = refine_model(&model, &s).unwrap();
        let gens = model.dual_basis.generators.len();
        let smooth = if gens == 0 {
            SmoothExpr::parse("2").unwrap()
        } else {
            SmoothExpr::parse(&format!("w1^2 + 3*w{gens} + 7")).unwrap()
        };
        let alpha: Vec<i64> = (0..model.m()).map(|i| i as i64 - 1).collect();
        let h = ExplodedMonomialFunction::new(smooth, frac(1, 3), alpha);
        for _ in 0..300 {
            let p = random_point(&mut rng, &model);
            let Ok(v) = h.eval(&model, &p) else { continue };
            let q = r.lift_point(&p).unwrap();
            let pulled = r.pull_function(&h, q.piece).unwrap();
            assert_eq!(pulled.eval(&r.charts[q.piece], &q.point).unwrap(), v);
        }
    }
}

#[test]
fn refinement_preserves_completeness() {
    for (_, s) in cases() {
        assert_eq!(is_complete_complex(&s.pieces).unwrap(), is_complete_complex(&[s.parent.clone()]).unwrap());
    }
}

fn ray_split(at: i64) -> Subdivision {
    let ray = IntegralCone::standard(1, 1).unwrap().as_polygon();
    let le = ExplodedPolygon::new(1, vec![PolygonConstraint::new(rat(at), vec![-1], false)]).unwrap();
    let ge = ExplodedPolygon::new(1, vec![PolygonConstraint::new(rat(-at), vec![1], false)]).unwrap();
    Subdivision::new(ray.clone(), vec![ray.intersect(&le), ray.intersect(&ge)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pullback_is_functorial(
        g_row in proptest::collection::vec(0i64..=3, 2),
        f_rows in proptest::collection::vec(proptest::collection::vec(0i64..=2, 2), 2),
        at in 1i64..=4,
    ) {
        // quadrant -f-> quadrant -g-> ray, all maps send cones into cones
        let quadrant = IntegralCone::standard(2, 2).unwrap().as_polygon();
        let f = MonomialMorphism::from_rows(f_rows).unwrap();
        let g = MonomialMorphism::from_rows(vec![g_row]).unwrap();
        let s = ray_split(at);
        let direct = pullback_refinement(&g.compose(&f).unwrap(), &quadrant, &s).unwrap();
        let mid = pullback_refinement(&g, &quadrant, &s).unwrap();
        let stepwise = pullback_refinement(&f, &quadrant, &mid).unwrap();
        prop_assert!(direct.same_as(&stepwise));
        prop_assert!(validate_subdivision(&direct).unwrap().valid);
    }
}
