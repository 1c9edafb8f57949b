//! One handler per subcommand: decode the request, call the kernel, encode
//! the result.

use std::cmp::Ordering;

use exploded_core::annuli::{
    concat, cut, fit_cylinder_model, glue, modulus_of_q, AnnulusSamples, ConformalModulus, CutoffPair, CylinderSamples,
    GluingParameter, GluingSamples,
};
use exploded_core::coordmodel::{eval_function, CoordModel, CoordModelPoint, ExplodedMonomialFunction, MonomialMorphism, SmoothExpr};
use exploded_core::grid::GridBlock;
use exploded_core::lattice::{is_complete_complex, smith_normal_form, ExplodedPolygon, IntegralCone};
use exploded_core::refinement::{pullback_refinement, refine_model, validate_subdivision, Subdivision};
use exploded_core::regularity::{
    apply_delta_i, apply_e_s, seminorm_estimate, weight_w_i, SampledFunction, SmoothPolynomial, StrataSelector,
};
use exploded_core::semiring::{compare_positive, parse_expression, ExplodedValue, PositiveExploded, Scalar};
use exploded_core::tropcurve::{check_balancing, corner_locus, prevariety, BalancedGraph, TropicalPolynomial};
use exploded_core::{Error, Result};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::{real, Request};
use crate::svg::{render_svg, Viewport};

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("kernel types serialize")
}

fn smooth_scalar(v: &ExplodedValue) -> Result<Scalar> {
    Ok(match v {
        ExplodedValue::Exact(x) => Scalar::Exact(x.smooth_part()?),
        ExplodedValue::Float(x) => Scalar::Float(x.smooth_part()?),
    })
}

fn positive(src: &str) -> Result<PositiveExploded> {
    let v = parse_expression(src)?;
    let x = v.as_exact()?;
    if x.coeff.im != exploded_core::rational::rat(0) {
        return Err(Error::Domain(format!("{src} is not a positive real exploded number")));
    }
    PositiveExploded::new(x.coeff.re.clone(), x.exponent.clone())
}

pub fn eval(req: &Request) -> Result<Value> {
    req.allow(&["expr", "part", "compare", "model", "point", "function", "polynomial"])?;
    if let Some(src) = req.opt::<String>("expr")? {
        let v = parse_expression(&src)?;
        let part: String = req.opt("part")?.unwrap_or_else(|| "all".into());
        let smooth = match part.as_str() {
            "smooth" => Some(smooth_scalar(&v)?),
            "all" | "tropical" => smooth_scalar(&v).ok(),
            other => return Err(Error::Usage(format!("unknown part {other:?}; use smooth, tropical or all"))),
        };
        let mut out = json!({
            "value": v.to_string(),
            "exploded": to_value(&v),
            "tropical": format!("t^{}", exploded_core::rational::format_rational(v.exponent())),
        });
        if part != "tropical" {
            out["smooth"] = smooth.map_or(Value::Null, |s| Value::String(s.to_string()));
        }
        return Ok(out);
    }
    if let Some([a, b]) = req.opt::<[String; 2]>("compare")? {
        let ord = match compare_positive(&positive(&a)?, &positive(&b)?) {
            Ordering::Less => "less",
            Ordering::Equal => "equal",
            Ordering::Greater => "greater",
        };
        return Ok(json!({ "ordering": ord }));
    }
    if let Some(poly) = req.opt::<TropicalPolynomial>("polynomial")? {
        let point: Vec<String> = req.get("point")?;
        let a = point.iter().map(|s| exploded_core::rational::parse_rational(s)).collect::<Result<Vec<_>>>()?;
        return Ok(json!({
            "value": poly.eval(&a)?.to_string(),
            "achieving": to_value(&poly.achieving_set(&a)?),
        }));
    }
    let model: CoordModel = req.get("model")?;
    let mut out = json!({ "integral_tangent": to_value(&model.integral_tangent_basis()) });
    if let Some(p) = req.opt::<CoordModelPoint>("point")? {
        out["parts"] = to_value(&model.point_parts(&p)?);
        if let Some(h) = req.opt::<ExplodedMonomialFunction>("function")? {
            let v = eval_function(&h, &model, &p)?;
            out["value"] = Value::String(v.to_string());
            out["exploded"] = to_value(&v);
        }
    }
    Ok(out)
}

fn polygon_input(req: &Request) -> Result<ExplodedPolygon> {
    match (req.opt::<IntegralCone>("cone")?, req.opt::<ExplodedPolygon>("polygon")?) {
        (Some(c), None) => Ok(c.as_polygon()),
        (None, Some(p)) => Ok(p),
        _ => Err(Error::Validation("give exactly one of \"cone\" and \"polygon\"".into())),
    }
}

pub fn dual_cone(req: &Request) -> Result<Value> {
    req.allow(&["cone"])?;
    let cone: IntegralCone = req.get("cone")?;
    Ok(to_value(&cone.dual_cone_hilbert_basis()?))
}

pub fn faces(req: &Request) -> Result<Value> {
    req.allow(&["cone", "polygon", "cells"])?;
    if let Some(cells) = req.opt::<Vec<ExplodedPolygon>>("cells")? {
        return Ok(json!({ "complete": is_complete_complex(&cells)? }));
    }
    let p = polygon_input(req)?;
    let faces: Vec<Value> = p
        .strata()?
        .iter()
        .map(|s| json!({ "tight": s.tight, "dim": s.dim, "face": to_value(&p.face(s)) }))
        .collect();
    Ok(json!({ "count": faces.len(), "faces": faces }))
}

pub fn strata(req: &Request) -> Result<Value> {
    req.allow(&["cone", "polygon", "tight"])?;
    let p = polygon_input(req)?;
    let all = p.strata()?;
    if let Some(mut tight) = req.opt::<Vec<usize>>("tight")? {
        tight.sort_unstable();
        let s = all
            .iter()
            .find(|s| s.tight == tight)
            .ok_or_else(|| Error::Usage(format!("tight set {tight:?} is not a stratum")))?;
        return Ok(json!({ "stratum": to_value(s), "local_cone": to_value(&p.local_cone_at(s)?) }));
    }
    Ok(json!({ "count": all.len(), "strata": to_value(&all) }))
}

pub fn family_check(req: &Request) -> Result<Value> {
    req.allow(&["morphism", "source", "target"])?;
    let f: MonomialMorphism = req.get("morphism")?;
    let snf = smith_normal_form(&f.alpha);
    let mut out = json!({
        "family": f.check_family_condition(),
        "invariant_factors": snf.invariant_factors(),
        "smith": to_value(&snf),
    });
    if let (Some(s), Some(t)) = (req.opt::<IntegralCone>("source")?, req.opt::<IntegralCone>("target")?) {
        out["maps_cone"] = Value::Bool(f.maps_cone(&s, &t));
    }
    Ok(out)
}

pub fn fiber_mult(req: &Request) -> Result<Value> {
    req.allow(&["morphism", "source"])?;
    let f: MonomialMorphism = req.get("morphism")?;
    let source = req.opt::<IntegralCone>("source")?.unwrap_or_else(|| IntegralCone::whole_space(f.source_dim()));
    let mut out = to_value(&f.fiber_multiplicity(&source)?);
    out["tropically_proper"] = Value::Bool(f.is_tropically_proper(&source)?);
    Ok(out)
}

pub fn corner_locus_cmd(req: &Request) -> Result<(Value, BalancedGraph)> {
    req.allow(&["polynomial"])?;
    let p: TropicalPolynomial = req.get("polynomial")?;
    let g = corner_locus(&p)?;
    let mut out = json!({ "graph": to_value(&g) });
    out["balanced"] = Value::Bool(check_balancing(&g)?.balanced);
    Ok((out, g))
}

pub fn balance_check(req: &Request) -> Result<Value> {
    req.allow(&["graph"])?;
    let g: BalancedGraph = req.get("graph")?;
    Ok(to_value(&check_balancing(&g)?))
}

pub fn prevariety_cmd(req: &Request) -> Result<Value> {
    req.allow(&["polynomials"])?;
    let polys: Vec<TropicalPolynomial> = req.get("polynomials")?;
    Ok(to_value(&prevariety(&polys)?))
}

pub fn refine(req: &Request) -> Result<Value> {
    req.allow(&["subdivision", "model", "morphism", "source"])?;
    let s: Subdivision = req.get("subdivision")?;
    if let Some(f) = req.opt::<MonomialMorphism>("morphism")? {
        let source: ExplodedPolygon = req.get("source")?;
        return Ok(json!({ "pullback": to_value(&pullback_refinement(&f, &source, &s)?) }));
    }
    let report = validate_subdivision(&s)?;
    let mut out = json!({ "report": to_value(&report) });
    if let Some(model) = req.opt::<CoordModel>("model")? {
        let refined = refine_model(&model, &s)?;
        out["charts"] = to_value(&refined.charts);
    }
    Ok(out)
}

pub fn lift(req: &Request) -> Result<Value> {
    req.allow(&["model", "subdivision", "points", "function"])?;
    let model: CoordModel = req.get("model")?;
    let s = req.opt::<Subdivision>("subdivision")?.unwrap_or_else(|| Subdivision::trivial(model.cone.as_polygon()));
    let refined = refine_model(&model, &s)?;
    let points: Vec<CoordModelPoint> = req.get("points")?;
    let mut lifted = Vec::with_capacity(points.len());
    let mut round_trip = true;
    for p in &points {
        let q = refined.lift_point(p)?;
        round_trip &= refined.project(&q)? == *p;
        lifted.push(to_value(&q));
    }
    let mut out = json!({ "lifted": lifted, "round_trip": round_trip });
    if let Some(h) = req.opt::<ExplodedMonomialFunction>("function")? {
        let pulled = (0..refined.charts.len()).map(|i| refined.pull_function(&h, i).map(|f| to_value(&f))).collect::<Result<Vec<_>>>()?;
        out["pulled"] = Value::Array(pulled);
    }
    Ok(out)
}

fn selector(req: &Request, model: &CoordModel) -> Result<StrataSelector> {
    let sets: Vec<Vec<usize>> = req.get("strata")?;
    StrataSelector::new(model, &sets)
}

pub fn delta(req: &Request) -> Result<Value> {
    req.allow(&["model", "strata", "project", "f"])?;
    let model: CoordModel = req.get("model")?;
    let f = SmoothPolynomial::parse(&req.get::<String>("f")?, model.dual_basis.len())?;
    let result = if let Some(tight) = req.opt::<Vec<usize>>("project")? {
        let sel = StrataSelector::new(&model, &[tight])?;
        apply_e_s(&model, &sel.strata[0], &f)
    } else {
        apply_delta_i(&model, &selector(req, &model)?, &f)
    };
    Ok(json!({ "coordinates": model.dual_basis.generators, "result": result.to_string() }))
}

pub fn weights(req: &Request) -> Result<Value> {
    req.allow(&["model", "strata"])?;
    let model: CoordModel = req.get("model")?;
    let w = weight_w_i(&model, &selector(req, &model)?)?;
    let mut out = to_value(&w);
    out["coordinates"] = to_value(&model.dual_basis.generators);
    out["weight"] = to_value(&w.as_polynomials().iter().map(|p| p.to_string()).collect::<Vec<_>>());
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    axes: Option<Vec<Vec<Complex64>>>,
    points: Option<Vec<Vec<Complex64>>>,
    values: Option<Vec<Complex64>>,
    values_file: Option<String>,
    f: Option<String>,
}

fn sampled_function(req: &Request, k: usize) -> Result<SampledFunction> {
    let g: GridSpec = req.get("grid")?;
    let points = match (g.axes, g.points) {
        (Some(axes), None) => axes.iter().fold(vec![Vec::new()], |acc, axis| {
            acc.iter().flat_map(|p| axis.iter().map(move |z| [p.clone(), vec![*z]].concat())).collect()
        }),
        (None, Some(points)) => points,
        _ => return Err(Error::Validation("grid needs exactly one of \"axes\" and \"points\"".into())),
    };
    let values = match (g.values, g.values_file, g.f) {
        (Some(v), None, None) => v,
        (None, Some(path), None) => GridBlock::from_bytes(&req.read_relative(&path)?)?.complex_values(),
        (None, None, Some(src)) => {
            let f = SmoothPolynomial::parse(&src, k)?;
            points.iter().map(|p| f.eval(p)).collect()
        }
        _ => return Err(Error::Validation("grid needs exactly one of \"values\", \"values_file\" and \"f\"".into())),
    };
    SampledFunction::from_points(points, values)
}

pub fn seminorm(req: &Request) -> Result<Value> {
    req.allow(&["model", "grid", "k", "delta"])?;
    let model: CoordModel = req.get("model")?;
    let f = sampled_function(req, model.dual_basis.len())?;
    let k: usize = req.get("k")?;
    let delta = real("delta", &req.get::<Value>("delta")?)?;
    Ok(to_value(&seminorm_estimate(&model, &f, k, delta)?))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GluingInput {
    Value(ExplodedValue),
    LogPolar(GluingParameter),
}

pub fn modulus(req: &Request) -> Result<Value> {
    req.allow(&["q", "concat", "round"])?;
    let m = if let Some(q) = req.opt::<GluingInput>("q")? {
        let q = match q {
            GluingInput::Value(v) => GluingParameter::from_value(&v)?,
            GluingInput::LogPolar(p) => p,
        };
        modulus_of_q(&q)?
    } else if let Some(parts) = req.opt::<Vec<ConformalModulus>>("concat")? {
        for p in &parts {
            p.validate()?;
        }
        let (first, rest) = parts.split_first().ok_or_else(|| Error::Validation("nothing to concatenate".into()))?;
        rest.iter().fold(first.clone(), |acc, m| concat(&acc, m))
    } else if let Some([inner, outer]) = req.opt::<[f64; 2]>("round")? {
        ConformalModulus::round(inner, outer)?
    } else {
        return Err(Error::Validation("give one of \"q\", \"concat\" and \"round\"".into()));
    };
    Ok(json!({ "modulus": to_value(&m) }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnulusLayout {
    q: Complex64,
    n_radii: usize,
    n_angles: usize,
}

/// Samples either given explicitly or generated from expressions in
/// `w1 = z+` and `w2 = z-`.
fn annulus_samples(req: &Request) -> Result<AnnulusSamples> {
    if let Some(s) = req.opt::<AnnulusSamples>("annulus")? {
        return Ok(s);
    }
    let layout: AnnulusLayout = req.get("layout")?;
    let map: Vec<SmoothExpr> = req.get("map")?;
    let eval = |zp: Complex64, zm: Complex64| map.iter().map(|e| e.eval(&[], &[zp, zm])).collect::<Result<Vec<_>>>();
    let probe = AnnulusSamples::log_polar(layout.q, layout.n_radii, layout.n_angles, |_, _| Vec::new());
    let values = probe.z_plus.iter().map(|&zp| eval(zp, layout.q / zp)).collect::<Result<Vec<_>>>()?;
    Ok(AnnulusSamples { values, ..probe })
}

fn cutoffs(req: &Request) -> Result<CutoffPair> {
    CutoffPair::new(real("r", &req.get::<Value>("r")?)?)
}

pub fn cut_cmd(req: &Request) -> Result<Value> {
    req.allow(&["r", "annulus", "layout", "map"])?;
    Ok(to_value(&cut(&annulus_samples(req)?, &cutoffs(req)?)?))
}

pub fn glue_cmd(req: &Request) -> Result<Value> {
    req.allow(&["r", "samples", "annulus", "layout", "map"])?;
    let c = cutoffs(req)?;
    if let Some(s) = req.opt::<GluingSamples>("samples")? {
        return Ok(json!({ "values": to_value(&glue(&s, &c)?) }));
    }
    let annulus = annulus_samples(req)?;
    let glued = glue(&cut(&annulus, &c)?, &c)?;
    let max_error = glued
        .iter()
        .zip(&annulus.values)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max);
    Ok(json!({ "samples": glued.len(), "max_error": max_error }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CylinderLayout {
    r: f64,
    n_circles: usize,
    n_theta: usize,
}

pub fn fit_cylinder(req: &Request) -> Result<Value> {
    req.allow(&["delta", "samples", "layout", "map", "samples_file", "r"])?;
    let delta = real("delta", &req.get::<Value>("delta")?)?;
    let samples = if let Some(s) = req.opt::<CylinderSamples>("samples")? {
        s
    } else if req.has("samples_file") {
        let r = real("r", &req.get::<Value>("r")?)?;
        let block = GridBlock::from_bytes(&req.read_bytes("samples_file")?)?;
        let [circles, n_theta, k] = block.dims[..] else {
            return Err(Error::Data(format!("cylinder samples need dims [circles, angles, k], got {:?}", block.dims)));
        };
        let t = (0..circles)
            .map(|i| if circles > 1 { -(r + 1.0) + 2.0 * (r + 1.0) * i as f64 / (circles - 1) as f64 } else { 0.0 })
            .collect();
        CylinderSamples { r, t, n_theta: n_theta as usize, k: k as usize, n_real: 0, complex: block.complex_values(), real: vec![] }
    } else {
        let layout: CylinderLayout = req.get("layout")?;
        let map: Vec<SmoothExpr> = req.get("map")?;
        let k = map.len();
        let probe = CylinderSamples::tabulate(layout.r, layout.n_circles, layout.n_theta, k, 0, |z| {
            (map.iter().map(|e| e.eval(&[], &[z]).unwrap_or(Complex64::new(f64::NAN, 0.0))).collect(), vec![])
        });
        if probe.complex.iter().any(|z| z.re.is_nan()) {
            return Err(Error::Domain("map is undefined at a sample".into()));
        }
        probe
    };
    Ok(to_value(&fit_cylinder_model(&samples, delta)?))
}

#[derive(Deserialize)]
struct ViewportRepr([[String; 2]; 2]);

pub fn render(req: &Request) -> Result<(Value, String)> {
    req.allow(&["graph", "polynomial", "viewport", "inset"])?;
    let g = match (req.opt::<BalancedGraph>("graph")?, req.opt::<TropicalPolynomial>("polynomial")?) {
        (Some(g), None) => g,
        (None, Some(p)) => corner_locus(&p)?,
        _ => return Err(Error::Validation("give exactly one of \"graph\" and \"polynomial\"".into())),
    };
    let viewport = req
        .opt::<ViewportRepr>("viewport")?
        .map(|ViewportRepr([[x0, x1], [y0, y1]])| Viewport::parse(&x0, &x1, &y0, &y1))
        .transpose()?;
    let inset = req.opt::<bool>("inset")?.unwrap_or(true);
    let svg = render_svg(&g, viewport.as_ref(), inset)?;
    Ok((json!({ "lines": svg.lines, "labels": svg.labels }), svg.text))
}
