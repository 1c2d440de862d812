//! JSON reports, one builder per subcommand. Field order is fixed.

use fiberatlas_core::fiber::{ExactnessReport, TranslationFiber};
use fiberatlas_core::grid::Grid;
use fiberatlas_core::newton::{
    hypothesis_check, newton_polygon, predict, weak_nondegeneracy, BivarPolynomial, FiberPrediction, LatticePoint,
};
use fiberatlas_core::numerics::{CrReport, CycleLabel, PeriodSample, Topology};
use fiberatlas_core::overlap::{ExtensionCertificate, OverlapDecision};
use fiberatlas_core::word::{glue, matrices, QuadraticWord};
use fiberatlas_core::{Complex64, Result};
use serde_json::Value;

use crate::json::{complex, complexes, matrix, num, nums, object, opt_num, usizes};

fn point(p: LatticePoint) -> Value {
    Value::from(vec![p.0, p.1])
}

fn points(ps: &[LatticePoint]) -> Value {
    Value::Array(ps.iter().copied().map(point).collect())
}

pub fn word(w: &QuadraticWord) -> Value {
    let surf = glue(w);
    let data = matrices(w);
    object([
        ("n", Value::from(w.n())),
        ("sigma", usizes(w.sigma_vec())),
        ("tau", usizes(w.tau_vec())),
        ("s", Value::from(surf.s)),
        ("g", Value::from(surf.g)),
        ("tree_ok", Value::from(surf.tree_ok)),
        ("A", matrix(&data.a)),
        ("T", matrix(&data.t)),
        ("phi", matrix(&data.phi)),
    ])
}

pub fn certificate(c: &ExtensionCertificate) -> Value {
    object([
        ("triangles", Value::Array(c.triangles.iter().map(|t| usizes(t)).collect())),
        ("cuts", Value::Array(c.cuts.iter().map(|&(a, b)| usizes(&[a, b])).collect())),
        ("pieces", Value::Array(c.pieces.iter().map(|p| usizes(p)).collect())),
        ("corner_angles", nums(&c.corner_angles)),
        ("corner_multiplicity", Value::from(c.corner_multiplicity.clone())),
        ("excess", Value::from(c.excess())),
    ])
}

pub fn fiber(w: &QuadraticWord, f: &TranslationFiber, extension: Option<&ExtensionCertificate>) -> Value {
    let (orders, deviation) = f.cone_orders();
    let classes = f.surface.classes();
    let cones = classes
        .iter()
        .zip(&f.cone_angles)
        .zip(&orders)
        .map(|((members, &angle), &order)| {
            object([("corners", usizes(members)), ("angle", num(angle)), ("angle_over_2pi", Value::from(order))])
        })
        .collect();
    let pairings = f
        .pairing
        .iter()
        .map(|p| {
            object([
                ("letter", Value::from(p.letter)),
                ("side", Value::from(p.side)),
                ("hat_side", Value::from(p.hat_side)),
                ("translation", complex(p.translation)),
            ])
        })
        .collect();
    let vertices: Vec<Complex64> = (1..=f.chain.len()).map(|l| f.chain.vertex(l)).collect();
    object([
        ("word", Value::from(w.to_text())),
        ("n", Value::from(w.n())),
        ("g", Value::from(f.surface.g)),
        ("s", Value::from(f.surface.s)),
        ("embedded", Value::from(extension.is_none())),
        ("extension", extension.map_or(Value::Null, certificate)),
        ("vertices", complexes(&vertices)),
        ("corner_angles", nums(&f.corner_angles)),
        ("cone_points", Value::Array(cones)),
        ("total_angle", num(f.total_angle())),
        ("angle_deviation", num(deviation)),
        ("pairings", Value::Array(pairings)),
    ])
}

pub fn exactness(w: &QuadraticWord, r: &ExactnessReport) -> Value {
    object([
        ("word", Value::from(w.to_text())),
        ("n", Value::from(w.n())),
        ("residuals", nums(&r.residuals)),
        ("path_residuals", nums(&r.path_residuals)),
        ("max_residual", num(r.max_residual())),
        ("order", opt_num(r.order)),
        ("tol", num(r.tol)),
        ("passes", Value::from(r.passes)),
    ])
}

pub fn extension(
    decision: &OverlapDecision,
    certificates: &[ExtensionCertificate],
    branched: bool,
    complete: bool,
) -> Value {
    object([
        ("self_overlapping", Value::from(decision.self_overlapping)),
        ("turning", Value::from(decision.turning)),
        ("extensions_found", Value::from(certificates.len())),
        ("branched", Value::from(branched)),
        ("enumeration_complete", Value::from(complete)),
        ("certificates", Value::Array(certificates.iter().map(certificate).collect())),
    ])
}

fn prediction_pairs(p: &FiberPrediction) -> Value {
    Value::Array(
        p.pairs
            .iter()
            .map(|q| object([("A", point(q.a)), ("B", point(q.b)), ("angle_over_2pi", Value::from(q.angle_over_2pi))]))
            .collect(),
    )
}

/// Newton polygon report. The counts are the lattice-point rules; they are
/// the fiber's `(g, s)` only when `admissible` holds.
pub fn polynomial(f: &BivarPolynomial) -> Result<Value> {
    let poly = newton_polygon(f)?;
    let hyp = hypothesis_check(f)?;
    let nd = weak_nondegeneracy(f)?;
    let pred = predict(poly.clone());
    let witness = nd
        .witness
        .as_ref()
        .map_or(Value::Null, |w| object([("from", point(w.from)), ("to", point(w.to)), ("root", complex(w.root))]));
    let admissible = hyp.ok && nd.nondegenerate && pred.g > 0;
    Ok(object([
        ("expr", Value::from(f.to_string())),
        ("hull", points(&poly.vertices)),
        ("interior_count", Value::from(poly.interior_count())),
        ("boundary_points", points(&poly.boundary)),
        ("l", Value::from(hyp.l)),
        ("m", Value::from(hyp.m)),
        ("hypothesis_ok", Value::from(hyp.ok)),
        ("nondegenerate", Value::from(nd.nondegenerate)),
        ("nondegeneracy_exact", Value::from(nd.exact)),
        ("witness", witness),
        ("admissible", Value::from(admissible)),
        ("g", Value::from(pred.g)),
        ("s", Value::from(pred.s)),
        ("punctures", prediction_pairs(&pred)),
        ("gauss_bonnet_ok", Value::from(pred.gauss_bonnet_ok())),
    ]))
}

fn grid(g: &Grid) -> Value {
    object([
        ("x0", num(g.x0)),
        ("x1", num(g.x1)),
        ("y0", num(g.y0)),
        ("y1", num(g.y1)),
        ("nx", Value::from(g.nx)),
        ("ny", Value::from(g.ny)),
    ])
}

fn cycle(label: CycleLabel) -> Value {
    match label {
        CycleLabel::Pair(a, b) => object([("pair", usizes(&[a, b]))]),
        CycleLabel::Explicit(k) => object([("explicit", Value::from(k))]),
    }
}

/// Periods, residuals and orders, or nulls when no grid was requested.
pub fn period_fields(sample: Option<(&PeriodSample, &CrReport)>) -> [(&'static str, Value); 5] {
    let Some((s, r)) = sample else {
        return [
            ("grid", Value::Null),
            ("periods", Value::Array(Vec::new())),
            ("cr_residual", Value::Null),
            ("closedness_residual", Value::Null),
            ("order", Value::Null),
        ];
    };
    let periods = s
        .cycles
        .iter()
        .zip(&s.periods)
        .map(|(&label, values)| object([("cycle", cycle(label)), ("values", complexes(values))]))
        .collect();
    [
        ("grid", grid(&s.grid)),
        ("periods", Value::Array(periods)),
        ("cr_residual", num(r.cr_residual)),
        ("closedness_residual", num(r.closedness_residual)),
        ("order", object([("cr", opt_num(r.cr_order)), ("closedness", opt_num(r.closedness_order))])),
    ]
}

pub fn verification(
    critical: &[Complex64],
    topo: &Topology,
    prediction: Option<&FiberPrediction>,
    sample: Option<(&PeriodSample, &CrReport)>,
) -> Value {
    let m = &topo.monodromy;
    let loops = m
        .loops
        .iter()
        .map(|l| {
            object([("z", complex(l.point.z)), ("escape", Value::from(l.point.escape)), ("perm", usizes(&l.perm))])
        })
        .collect();
    let branch: Vec<Complex64> = m.loops.iter().map(|l| l.point.z).collect();
    let matched = prediction.is_some_and(|p| (p.g, p.s) == (topo.g, topo.s));
    let mut out = object([
        ("xi", complex(m.xi)),
        ("degree", Value::from(m.degree)),
        ("critical_values", complexes(critical)),
        ("branch_points", complexes(&branch)),
        ("base_point", complex(m.base_point)),
        ("permutations", object([("loops", Value::Array(loops)), ("infinity", usizes(&m.infinity))])),
        ("transitive", Value::from(m.is_transitive())),
        ("g_obs", Value::from(topo.g)),
        ("s_obs", Value::from(topo.s)),
        ("euler_ok", Value::from(topo.euler_ok)),
        ("prediction", prediction.map_or(Value::Null, |p| object([("g", Value::from(p.g)), ("s", Value::from(p.s))]))),
        ("match", Value::from(matched)),
    ]);
    let map = out.as_object_mut().expect("object");
    for (k, v) in period_fields(sample) {
        map.insert(k.to_string(), v);
    }
    out
}

pub fn periods(critical: &[Complex64], sample: &PeriodSample, cr: &CrReport) -> Value {
    let mut out = object([
        ("critical_values", complexes(critical)),
        ("branch_points", sample.branch_points.first().map_or(Value::Array(Vec::new()), |b| complexes(b))),
    ]);
    let map = out.as_object_mut().expect("object");
    for (k, v) in period_fields(Some((sample, cr))) {
        map.insert(k.to_string(), v);
    }
    out
}
