//! Refinements given by subdivisions of tropical parts: validation, charts,
//! point lifting and pullback along monomial morphisms.

use serde::{Deserialize, Serialize};

use crate::coordmodel::{CoordModel, CoordModelPoint, ExplodedMonomialFunction, MonomialMorphism, SmoothExpr};
use crate::error::{Error, Result};
use crate::lattice::{ExplodedPolygon, IntegralCone, PolygonConstraint};
use crate::rational::{dot_int, format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subdivision {
    pub parent: ExplodedPolygon,
    pub pieces: Vec<ExplodedPolygon>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Empty,
    Degenerate,
    NotContained,
    Overlap,
    NotAFace,
    Uncovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub pieces: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivisionReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl Subdivision {
    pub fn new(parent: ExplodedPolygon, pieces: Vec<ExplodedPolygon>) -> Result<Self> {
        if pieces.iter().any(|p| p.m() != parent.m()) {
            return Err(Error::Validation("pieces and parent live in different dimensions".into()));
        }
        Ok(Subdivision { parent, pieces })
    }

    pub fn of_cones(parent: &IntegralCone, pieces: &[IntegralCone]) -> Result<Self> {
        Subdivision::new(parent.as_polygon(), pieces.iter().map(IntegralCone::as_polygon).collect())
    }

    pub fn trivial(parent: ExplodedPolygon) -> Self {
        Subdivision { pieces: vec![parent.clone()], parent }
    }

    /// Index of the first piece containing `a`.
    pub fn locate(&self, a: &[Rational]) -> Option<usize> {
        self.pieces.iter().position(|p| p.contains(a))
    }

    /// Whether both subdivisions have the same parent and the same pieces as
    /// sets, ignoring order.
    pub fn same_as(&self, other: &Subdivision) -> bool {
        self.parent.set_eq(&other.parent)
            && self.pieces.len() == other.pieces.len()
            && self.pieces.iter().all(|p| other.pieces.iter().any(|q| q.set_eq(p)))
    }
}

/// Checks that the pieces lie in the parent, cover it, and meet pairwise in
/// common faces of lower dimension.
pub fn validate_subdivision(s: &Subdivision) -> Result<SubdivisionReport> {
    let mut violations = Vec::new();
    let Some(d) = s.parent.dimension() else {
        return Err(Error::Validation("parent is empty".into()));
    };
    let closures: Vec<ExplodedPolygon> = s.pieces.iter().map(ExplodedPolygon::closure).collect();
    let mut usable = vec![true; s.pieces.len()];
    for (i, p) in s.pieces.iter().enumerate() {
        match p.dimension() {
            None => {
                violations.push(Violation { kind: ViolationKind::Empty, pieces: vec![i], detail: "piece is empty".into() });
                usable[i] = false;
            }
            Some(k) if k != d => {
                violations.push(Violation {
                    kind: ViolationKind::Degenerate,
                    pieces: vec![i],
                    detail: format!("piece has dimension {k}, parent has {d}"),
                });
                usable[i] = false;
            }
            _ => {}
        }
        if usable[i] && !s.parent.contains_set(p) {
            violations.push(Violation {
                kind: ViolationKind::NotContained,
                pieces: vec![i],
                detail: "piece is not contained in the parent".into(),
            });
        }
    }
    if s.pieces.is_empty() {
        violations.push(Violation { kind: ViolationKind::Uncovered, pieces: vec![], detail: "no pieces".into() });
    }

    let faces: Vec<Vec<ExplodedPolygon>> =
        closures.iter().zip(&usable).map(|(c, &ok)| if ok { c.faces() } else { Ok(Vec::new()) }).collect::<Result<_>>()?;
    for i in 0..s.pieces.len() {
        for j in i + 1..s.pieces.len() {
            if !usable[i] || !usable[j] {
                continue;
            }
            let meet = closures[i].intersect(&closures[j]);
            let Some(k) = meet.dimension() else { continue };
            if k >= d {
                violations.push(Violation {
                    kind: ViolationKind::Overlap,
                    pieces: vec![i, j],
                    detail: format!("pieces share a {k}-dimensional region"),
                });
                continue;
            }
            let face_of = |fs: &[ExplodedPolygon]| fs.iter().any(|f| f.set_eq(&meet));
            if !face_of(&faces[i]) || !face_of(&faces[j]) {
                violations.push(Violation {
                    kind: ViolationKind::NotAFace,
                    pieces: vec![i, j],
                    detail: "pieces do not meet in a common face".into(),
                });
            }
        }
    }

    // Every facet of a piece lies on the parent's boundary or is a face of
    // another piece; with face-to-face intersections this forces a cover.
    if violations.is_empty() && d > 0 {
        let closed_parent = s.parent.closure();
        let implicit = closed_parent.polyhedron().implicit_equalities();
        let walls: Vec<PolygonConstraint> = closed_parent
            .constraints()
            .iter()
            .enumerate()
            .filter(|(k, _)| !implicit.contains(k))
            .map(|(_, w)| PolygonConstraint::new(w.c.clone(), w.alpha.clone(), true))
            .collect();
        for (i, c) in closures.iter().enumerate() {
            for st in c.strata()?.iter().filter(|st| st.dim + 1 == d) {
                let facet = c.face(st);
                let on_boundary = walls.iter().any(|w| facet.with_constraints([w.clone()]).is_empty());
                if on_boundary {
                    continue;
                }
                let shared = closures.iter().enumerate().any(|(j, other)| j != i && other.contains_set(&facet));
                if !shared {
                    violations.push(Violation {
                        kind: ViolationKind::Uncovered,
                        pieces: vec![i],
                        detail: format!("facet through {} borders an uncovered region", format_point(&st.sample)),
                    });
                }
            }
        }
    }
    Ok(SubdivisionReport { valid: violations.is_empty(), violations })
}

fn format_point(a: &[Rational]) -> String {
    let parts: Vec<String> = a.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// One chart per piece of a conical subdivision of a model's cone.
#[derive(Clone, Debug, Serialize)]
pub struct RefinedModel {
    pub parent: CoordModel,
    pub charts: Vec<CoordModel>,
    #[serde(skip)]
    pub subdivision: Subdivision,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftedPoint {
    pub piece: usize,
    pub point: CoordModelPoint,
}

pub fn refine_model(model: &CoordModel, s: &Subdivision) -> Result<RefinedModel> {
    if !s.parent.set_eq(&model.cone.as_polygon()) {
        return Err(Error::Usage("subdivision parent is not the model's cone".into()));
    }
    if let Some(i) = s.pieces.iter().position(|p| !p.is_conical()) {
        return Err(Error::Usage(format!("piece {i} is not a cone, charts need conical pieces")));
    }
    let report = validate_subdivision(s)?;
    if !report.valid {
        return Err(Error::Usage(format!("subdivision is invalid: {}", report.violations[0].detail)));
    }
    let charts = s
        .pieces
        .iter()
        .map(|p| CoordModel::new(model.n, p.recession_cone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(RefinedModel { parent: model.clone(), charts, subdivision: s.clone() })
}

impl RefinedModel {
    /// The unique preimage, tagged with the first piece containing its
    /// tropical part.
    pub fn lift_point(&self, p: &CoordModelPoint) -> Result<LiftedPoint> {
        self.parent.check_point(p)?;
        let piece = self
            .subdivision
            .locate(&p.tropical())
            .ok_or_else(|| Error::Validation("point is not covered by any piece".into()))?;
        Ok(LiftedPoint { piece, point: p.clone() })
    }

    /// The refinement map back to the parent, the identity in coordinates.
    pub fn project(&self, q: &LiftedPoint) -> Result<CoordModelPoint> {
        let chart = self.charts.get(q.piece).ok_or_else(|| Error::Usage(format!("no chart {}", q.piece)))?;
        chart.check_point(&q.point)?;
        Ok(q.point.clone())
    }

    /// Rewrites a function on the parent in the smooth coordinates of a chart.
    pub fn pull_function(&self, h: &ExplodedMonomialFunction, piece: usize) -> Result<ExplodedMonomialFunction> {
        let chart = self.charts.get(piece).ok_or_else(|| Error::Usage(format!("no chart {piece}")))?;
        let parent_gens = &self.parent.dual_basis.generators;
        let mut subs = Vec::with_capacity(parent_gens.len());
        for g in parent_gens {
            let powers = chart
                .dual_basis
                .decompose(g)
                .ok_or_else(|| Error::Validation("parent coordinate is not a chart monomial".into()))?;
            subs.push(SmoothExpr::smooth_monomial(&powers));
        }
        Ok(ExplodedMonomialFunction::new(h.smooth.substitute_smooth(&|j| subs[j].clone()), h.y.clone(), h.alpha.clone()))
    }
}

/// Preimage of a subdivision of the target under the tropical part of `f`,
/// restricted to `source`.
pub fn pullback_refinement(f: &MonomialMorphism, source: &ExplodedPolygon, s: &Subdivision) -> Result<Subdivision> {
    if f.source_dim() != source.m() || f.target_dim() != s.parent.m() {
        return Err(Error::Usage("morphism dimensions do not match the source and the subdivision".into()));
    }
    let zero = vec![Rational::from_integer(0.into()); source.m()];
    let shift = f.tropical_image(&zero);
    let pull = |q: &ExplodedPolygon| -> ExplodedPolygon {
        let extra = q.constraints().iter().map(|k| {
            let alpha = f.alpha.transpose().apply(&k.alpha);
            PolygonConstraint::new(&k.c + dot_int(&k.alpha, &shift), alpha, k.strict)
        });
        source.with_constraints(extra).simplified()
    };
    let d = source.dimension();
    let mut pieces: Vec<ExplodedPolygon> = Vec::new();
    for q in &s.pieces {
        let pre = pull(q);
        if pre.dimension() != d || d.is_none() {
            continue;
        }
        if pieces.iter().any(|p| p.set_eq(&pre)) {
            continue;
        }
        pieces.push(pre);
    }
    Subdivision::new(source.clone(), pieces)
}
