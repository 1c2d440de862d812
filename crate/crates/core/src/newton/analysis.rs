use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::lattice::{LatticeEdge, LatticePoint};
use super::{newton_polygon, BivarPolynomial, LatticePolygon};
use crate::algebra::{eval_complex, polish_root, poly_roots, QPoly};
use crate::{Error, Result};

/// The sandwich `Delta(1 + z^l + w^m) <= Delta(f) <= Delta((1 + z^l)(1 + w^m))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub l: u32,
    pub m: u32,
    pub ok: bool,
}

pub fn hypothesis_check(f: &BivarPolynomial) -> Result<HypothesisCheck> {
    let poly = newton_polygon(f)?;
    let (l, m) = (f.degree_z(), f.degree_w());
    // the upper bound holds by definition of the degrees
    let ok = l >= 1 && m >= 1 && [(0, 0), (l as i64, 0), (0, m as i64)].iter().all(|&p| poly.contains(p));
    Ok(HypothesisCheck { l, m, ok })
}

/// A side whose truncation `f_e` has a critical zero in the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateEdge {
    pub from: LatticePoint,
    pub to: LatticePoint,
    /// A repeated root of the edge polynomial `G(u)`.
    pub root: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    pub witness: Option<DegenerateEdge>,
    /// Whether the verdict came from exact gcd computations.
    pub exact: bool,
}

/// Relative distance below which two roots of a floating edge polynomial
/// count as one repeated root.
const CLUSTER_TOL: f64 = 1e-9;

/// Checks every side of the Newton polygon off the coordinate axes: with
/// `f_e = z^a w^b G(u)` along the primitive direction of the side, the side
/// is degenerate iff `G` has a repeated root (all roots of `G` are nonzero).
pub fn weak_nondegeneracy(f: &BivarPolynomial) -> Result<Nondegeneracy> {
    let poly = newton_polygon(f)?;
    for e in poly.edges.iter().filter(|e| !e.on_axis()) {
        let g = edge_polynomial(f, e);
        let repeated = if f.is_exact() { exact_repeated_root(&g)? } else { clustered_root(&g)? };
        if let Some(root) = repeated {
            return Ok(Nondegeneracy {
                nondegenerate: false,
                witness: Some(DegenerateEdge { from: e.from, to: e.to, root }),
                exact: f.is_exact(),
            });
        }
    }
    Ok(Nondegeneracy { nondegenerate: true, witness: None, exact: f.is_exact() })
}

fn edge_polynomial(f: &BivarPolynomial, e: &LatticeEdge) -> QPoly {
    QPoly::new(e.points.iter().map(|&(l, m)| f.coeff(l as u32, m as u32)).collect())
}

fn exact_repeated_root(g: &QPoly) -> Result<Option<Complex64>> {
    let d = g.gcd(&g.derivative());
    if d.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let r = poly_roots(&d.to_complex())?;
    Ok(r.first().copied())
}

/// Near-coincident roots are merged and refined as a root of `G'`; the
/// merged point is a repeated root when `G` vanishes there to relative
/// accuracy [`CLUSTER_TOL`].
fn clustered_root(g: &QPoly) -> Result<Option<Complex64>> {
    let c = g.to_complex();
    let dc = g.derivative().to_complex();
    let r = poly_roots(&c)?;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            let scale = r[i].norm().max(1.0);
            if (r[i] - r[j]).norm() > 1e-4 * scale {
                continue;
            }
            let x = polish_root(&dc, (r[i] + r[j]) / 2.0);
            let size: f64 = c.iter().enumerate().map(|(k, a)| a.norm() * libm::pow(x.norm(), k as f64)).sum();
            let dsize: f64 = dc.iter().enumerate().map(|(k, a)| a.norm() * libm::pow(x.norm(), k as f64)).sum();
            let (v, dv) = eval_complex(&c, x);
            if v.norm() <= CLUSTER_TOL * size && dv.norm() <= libm::sqrt(CLUSTER_TOL) * dsize {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Neighbouring boundary points `A`, `B` and the cone angle `4 pi s_AB`
/// of the puncture they bound, where `s_AB` is the area of `A, B, (1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PuncturePair {
    pub a: LatticePoint,
    pub b: LatticePoint,
    /// `4 pi s_AB / 2 pi = 2 s_AB`, an integer.
    pub angle_over_2pi: i64,
}

/// Genus, punctures and cone angle spectrum read off the Newton polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPrediction {
    pub g: usize,
    pub s: usize,
    pub pairs: Vec<PuncturePair>,
    pub polygon: LatticePolygon,
}

impl FiberPrediction {
    /// `sum 4 pi s_AB == 2 pi (s + 2g - 2)`, in units of `2 pi`.
    pub fn gauss_bonnet_ok(&self) -> bool {
        self.total_angle_over_2pi() == self.s as i64 + 2 * self.g as i64 - 2
    }

    pub fn total_angle_over_2pi(&self) -> i64 {
        self.pairs.iter().map(|p| p.angle_over_2pi).sum()
    }
}

/// Prediction for an admissible, weakly nondegenerate `f` with `g > 0`.
pub fn fiber_prediction(f: &BivarPolynomial) -> Result<FiberPrediction> {
    let hyp = hypothesis_check(f)?;
    if !hyp.ok {
        return Err(Error::NotAdmissible(format!(
            "Newton polygon does not contain (0,0), ({}, 0) and (0, {})",
            hyp.l, hyp.m
        )));
    }
    let nd = weak_nondegeneracy(f)?;
    if let Some(w) = nd.witness {
        return Err(Error::NotAdmissible(format!(
            "degenerate side {:?}-{:?}: repeated root {} of the edge polynomial",
            w.from, w.to, w.root
        )));
    }
    let polygon = newton_polygon(f)?;
    let g = polygon.interior_count();
    if g == 0 {
        return Err(Error::NotAdmissible(
            "no interior lattice points (g = 0); the prediction covers g > 0 only".into(),
        ));
    }
    Ok(predict(polygon))
}

/// The counting rules alone, without the admissibility checks.
pub fn predict(polygon: LatticePolygon) -> FiberPrediction {
    let on_x0 = |p: LatticePoint| p.0 == 0;
    let on_y0 = |p: LatticePoint| p.1 == 0;
    let s = 1 + polygon.boundary.iter().filter(|&&p| !on_x0(p) && !on_y0(p)).count();
    let nb = polygon.boundary.len();
    let pairs = (0..nb)
        .map(|k| (polygon.boundary[k], polygon.boundary[(k + 1) % nb]))
        .filter(|&(a, b)| !(on_x0(a) && on_x0(b)) && !(on_y0(a) && on_y0(b)))
        .map(|(a, b)| {
            let det = (b.0 - a.0) * (1 - a.1) - (b.1 - a.1) * (1 - a.0);
            PuncturePair { a, b, angle_over_2pi: det.abs() }
        })
        .collect();
    FiberPrediction { g: polygon.interior_count(), s, pairs, polygon }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn f(text: &str) -> BivarPolynomial {
        BivarPolynomial::parse(text).unwrap()
    }

    #[test]
    fn hypothesis_examples() {
        assert_eq!(hypothesis_check(&f("z^3 + w^2 + 1")).unwrap(), HypothesisCheck { l: 3, m: 2, ok: true });
        assert!(hypothesis_check(&f("1 + z^2 + w^2 + z^2*w^2")).unwrap().ok);
        assert!(!hypothesis_check(&f("z*w + z + w")).unwrap().ok);
        assert!(!hypothesis_check(&f("1 + z^2")).unwrap().ok);
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(weak_nondegeneracy(&f("1 + z^2 + w^2")).unwrap().nondegenerate);
        assert!(weak_nondegeneracy(&f("z^3 + w^2 + 1")).unwrap().nondegenerate);
        let nd = weak_nondegeneracy(&f("1 + 2*z^2*w + w^2 + z^4")).unwrap();
        assert!(!nd.nondegenerate);
        let w = nd.witness.unwrap();
        assert_eq!((w.from, w.to), ((4, 0), (0, 2)));
        // G(u) = (1 + u)^2 along the side
        assert!((w.root + 1.0).norm() < 1e-12);
    }

    #[test]
    fn floating_input_uses_clustering() {
        let g = BivarPolynomial::from_complex_terms([
            ((0, 0), Complex64::new(1.0, 0.0)),
            ((2, 1), Complex64::new(2.0, 0.0)),
            ((0, 2), Complex64::new(1.0, 0.0)),
            ((4, 0), Complex64::new(1.0, 0.0)),
        ]);
        let nd = weak_nondegeneracy(&g).unwrap();
        assert!(!nd.exact && !nd.nondegenerate);
    }

    #[test]
    fn predictions() {
        let p = fiber_prediction(&f("z^3 + w^2 + 1")).unwrap();
        assert_eq!((p.g, p.s), (1, 1));
        assert_eq!(p.pairs, vec![PuncturePair { a: (3, 0), b: (0, 2), angle_over_2pi: 1 }]);
        let p = fiber_prediction(&f("1 + z^2 + w^2 + z^2*w^2")).unwrap();
        assert_eq!((p.g, p.s), (1, 4));
        assert!(p.pairs.iter().all(|q| q.angle_over_2pi == 1) && p.pairs.len() == 4);
        let p = fiber_prediction(&f("1 + z^4 + w^3")).unwrap();
        assert_eq!((p.g, p.s), (3, 1));
        assert_eq!(p.pairs[0].angle_over_2pi, 5);
        assert!(p.gauss_bonnet_ok());
    }

    #[test]
    fn refusals() {
        assert!(matches!(fiber_prediction(&f("z^2 + w^2 + 1")), Err(Error::NotAdmissible(_))));
        assert!(matches!(fiber_prediction(&f("z*w + z + w")), Err(Error::NotAdmissible(_))));
        assert!(matches!(fiber_prediction(&f("1 + 2*z^2*w + w^2 + z^4")), Err(Error::NotAdmissible(_))));
    }
}
