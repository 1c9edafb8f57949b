use exploded_core::coordmodel::CoordModel;
use exploded_core::lattice::IntegralCone;
use exploded_core::rational::rat;
use exploded_core::regularity::{
    apply_delta_i, apply_e_s, seminorm_estimate, weight_w_i, DeltaOperator, SampledFunction, SmoothPolynomial,
    StrataSelector, ZeroMask,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn models() -> Vec<CoordModel> {
    vec![
        CoordModel::standard(0, 2, 2).unwrap(),
        CoordModel::standard(0, 3, 3).unwrap(),
        CoordModel::standard(0, 2, 1).unwrap(),
        CoordModel::new(0, IntegralCone::new(2, vec![vec![0, 1], vec![1, 2]]).unwrap()).unwrap(),
    ]
}

fn poly_strategy(k: usize) -> impl Strategy<Value = String> {
    prop::collection::vec((prop::collection::vec(0u32..3, k), -4i64..5), 1..6).prop_map(|terms| {
        terms
            .iter()
            .map(|(p, c)| {
                let mono: Vec<String> = p.iter().enumerate().map(|(j, e)| format!("w{}^{}", j + 1, e)).collect();
                format!("({c})*{}", mono.join("*"))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

/// Drops variables past `w_k` by setting them to one.
fn restrict(src: &str, k: usize) -> SmoothPolynomial {
    let text = (k + 1..=3).fold(src.to_string(), |t, j| t.replace(&format!("w{j}"), "1"));
    SmoothPolynomial::parse(&text, k).unwrap()
}

/// Points `w_j = z^{alpha^j}` for random `z` in the torus, closed under zeroing
/// the coordinates of every stratum.
fn model_grid(model: &CoordModel, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks = StrataSelector::all_nonzero(model).unwrap().masks(model);
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..count {
        let z: Vec<Complex64> =
            (0..model.m()).map(|_| Complex64::from_polar(rng.gen_range(0.2..1.5), rng.gen_range(0.0..6.28))).collect();
        let w: Vec<Complex64> = model
            .dual_basis
            .generators
            .iter()
            .map(|g| g.iter().zip(&z).map(|(&e, zi)| zi.powi(e as i32)).product())
            .collect();
        for m in masks.iter().chain([&ZeroMask::empty(w.len())]) {
            let p = m.apply(&w);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn sampled(model: &CoordModel, f: &SmoothPolynomial, seed: u64) -> SampledFunction {
    let points = model_grid(model, 12, seed);
    let values = points.iter().map(|p| f.eval(p)).collect();
    SampledFunction::from_points(points, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projections_are_commuting_idempotents(which in 0usize..4, src in poly_strategy(3), seed in 0u64..1000) {
        let model = &models()[which];
        let k = model.dual_basis.len();
        let f = restrict(&src, k);
        let sel = StrataSelector::all_nonzero(model).unwrap();
        let grid = sampled(model, &f, seed);
        for s in &sel.strata {
            let once = apply_e_s(model, s, &f);
            prop_assert_eq!(&apply_e_s(model, s, &once), &once);
            let mask = ZeroMask::at(model, &s.sample);
            let g1 = grid.project(&mask).unwrap();
            let g2 = g1.project(&mask).unwrap();
            prop_assert_eq!(g1.values(), g2.values());
            for t in &sel.strata {
                prop_assert_eq!(apply_e_s(model, t, &once), apply_e_s(model, s, &apply_e_s(model, t, &f)));
                let other = ZeroMask::at(model, &t.sample);
                let a = g1.project(&other).unwrap();
                let b = grid.project(&other).unwrap().project(&mask).unwrap();
                for (x, y) in a.values().iter().zip(b.values()) {
                    prop_assert!((x - y).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn projection_kills_the_difference(which in 0usize..4, src in poly_strategy(3), pick in prop::collection::vec(0usize..8, 1..3)) {
        let model = &models()[which];
        let k = model.dual_basis.len();
        let f = restrict(&src, k);
        let all = StrataSelector::all_nonzero(model).unwrap();
        let mut pick: Vec<usize> = pick.into_iter().map(|i| i % all.len()).collect();
        pick.sort_unstable();
        pick.dedup();
        let sel = all.subset(&pick);
        let d = apply_delta_i(model, &sel, &f);
        for s in &sel.strata {
            prop_assert!(apply_e_s(model, s, &d).is_zero());
        }
        let grid = sampled(model, &f, 7);
        let dg = grid.apply(&DeltaOperator::for_strata(model, &sel)).unwrap();
        for s in &sel.strata {
            let z = dg.project(&ZeroMask::at(model, &s.sample)).unwrap();
            prop_assert!(z.values().iter().all(|v| v.norm() <= 1e-9));
        }
    }

    #[test]
    fn mask_does_not_depend_on_the_sample(which in 0usize..4, seed in 0u64..1000) {
        let model = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in StrataSelector::all_nonzero(model).unwrap().strata {
            let base = ZeroMask::at(model, &s.sample);
            for _ in 0..50 {
                let a: Vec<i64> = (0..model.m()).map(|_| rng.gen_range(-6..7)).collect();
                let in_stratum = model.cone.ineqs.iter().enumerate().all(|(i, g)| {
                    let v: i64 = g.iter().zip(&a).map(|(x, y)| x * y).sum();
                    if s.tight.contains(&i) { v == 0 } else { v > 0 }
                });
                if in_stratum {
                    let q: Vec<_> = a.iter().map(|&x| rat(x)).collect();
                    prop_assert_eq!(&ZeroMask::at(model, &q), &base);
                }
            }
            let factor = rat(rng.gen_range(1..9));
            let scaled: Vec<_> = s.sample.iter().map(|x| x * &factor).collect();
            prop_assert_eq!(&ZeroMask::at(model, &scaled), &base);
        }
    }
}

/// Brute-force ideal membership: `Delta_I z^alpha = z^alpha` exactly when some
/// generator of `w_I` divides `z^alpha` in the dual monoid.
#[test]
fn weight_generators_span_the_fixed_monomials() {
    for model in models() {
        let all = StrataSelector::all_nonzero(&model).unwrap();
        let dual = model.dual_basis.dual_cone().clone();
        for pick in all.collections(2).into_iter().filter(|p| !p.is_empty()) {
            let sel = all.subset(&pick);
            let w = weight_w_i(&model, &sel).unwrap();
            let m = model.m();
            let range: Vec<i64> = (-4..=4).collect();
            let mut alpha = vec![0i64; m];
            let total = range.len().pow(m as u32);
            for code in 0..total {
                let mut c = code;
                for a in alpha.iter_mut() {
                    *a = range[c % range.len()];
                    c /= range.len();
                }
                if !dual.contains(&alpha) {
                    continue;
                }
                let fixed = sel.strata.iter().all(|s| {
                    let v: f64 = alpha.iter().zip(&s.sample).map(|(&a, x)| a as f64 * exploded_core::rational::to_f64(x)).sum();
                    v > 1e-12
                });
                let divisible = w.generators.iter().any(|g| {
                    let rest: Vec<i64> = alpha.iter().zip(g).map(|(a, b)| a - b).collect();
                    dual.contains(&rest)
                });
                assert_eq!(fixed, divisible, "alpha {alpha:?} strata {:?}", sel.tight_sets());
            }
        }
    }
}

fn ring_axis(levels: u32) -> Vec<Complex64> {
    let mut axis = vec![Complex64::new(0.0, 0.0)];
    for j in 0..=levels {
        let r = 0.5f64.powi(j as i32);
        for q in 0..4 {
            axis.push(Complex64::from_polar(r, q as f64 * std::f64::consts::FRAC_PI_2));
        }
    }
    axis
}

/// `f = Re(z1) |z2|^{1/2}` has finite seminorm exactly for exponents up to 1/2.
#[test]
fn planted_holder_profile() {
    let model = CoordModel::standard(0, 2, 2).unwrap();
    // Axis order follows the sorted generators: w1 = z2, w2 = z1.
    let profile = |w: &[Complex64]| Complex64::new(w[1].re * w[0].norm().sqrt(), 0.0);
    let coarse = SampledFunction::tabulate(&[ring_axis(10), ring_axis(10)], profile).unwrap();
    let fine = SampledFunction::tabulate(&[ring_axis(20), ring_axis(20)], profile).unwrap();
    for (delta, bounded) in [(0.3, true), (0.5, true), (0.6, false), (0.8, false)] {
        let a = seminorm_estimate(&model, &coarse, 2, delta).unwrap().value;
        let b = seminorm_estimate(&model, &fine, 2, delta).unwrap().value;
        if bounded {
            assert!(b <= a * 1.01 + 1e-12, "delta {delta}: {a} -> {b}");
        } else {
            assert!(b >= a * 1.5, "delta {delta}: {a} -> {b}");
        }
    }
}

/// Adding redundant generators changes `w_I` only by a bounded factor.
#[test]
fn weights_from_other_generators_are_comparable() {
    let model = CoordModel::standard(0, 2, 2).unwrap();
    let all = StrataSelector::all_nonzero(&model).unwrap();
    let axis = ring_axis(12);
    for pick in all.collections(2).into_iter().filter(|p| !p.is_empty()) {
        let w = weight_w_i(&model, &all.subset(&pick)).unwrap();
        let mut padded = w.clone();
        for p in &w.powers {
            padded.powers.push(p.iter().map(|k| k * 2).collect());
            padded.powers.push(p.iter().map(|k| k + 1).collect());
        }
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for a in &axis {
            for b in &axis {
                let p = [*a, *b];
                let (x, y) = (w.eval(&p), padded.eval(&p));
                if x > 0.0 {
                    lo = lo.min(y / x);
                    hi = hi.max(y / x);
                }
            }
        }
        assert!(lo >= 1.0 - 1e-12 && hi <= 1.0 + 2.0 + 2.0 * 2.0 + 1e-9, "{lo} {hi}");
    }
}
