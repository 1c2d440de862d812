use alloc::vec::Vec;

use num_integer::Integer;

use super::BivarPolynomial;
use crate::{Error, Result};

pub type LatticePoint = (i64, i64);

/// A side of a lattice polygon with its lattice points, `from` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEdge {
    pub from: LatticePoint,
    pub to: LatticePoint,
    /// Primitive step from `from` to `to`.
    pub direction: LatticePoint,
    pub points: Vec<LatticePoint>,
}

impl LatticeEdge {
    /// Whether the side lies on a coordinate axis.
    pub fn on_axis(&self) -> bool {
        (self.from.0 == 0 && self.to.0 == 0) || (self.from.1 == 0 && self.to.1 == 0)
    }
}

/// Convex hull of a finite lattice point set, with exact lattice counts.
///
/// Segments and single points are represented with one or two vertices;
/// a segment has a single edge and its boundary runs from one end to the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolygon {
    /// Counter-clockwise extreme points, starting at the lexicographic minimum.
    pub vertices: Vec<LatticePoint>,
    pub edges: Vec<LatticeEdge>,
    /// Boundary lattice points in cyclic order, starting at the first vertex.
    pub boundary: Vec<LatticePoint>,
    pub interior: Vec<LatticePoint>,
    /// Twice the area.
    pub area2: i64,
}

impl LatticePolygon {
    pub fn from_points(points: &[LatticePoint]) -> Self {
        let vertices = hull(points);
        let edges: Vec<LatticeEdge> = match vertices.len() {
            0 | 1 => Vec::new(),
            2 => alloc::vec![edge(vertices[0], vertices[1])],
            m => (0..m).map(|k| edge(vertices[k], vertices[(k + 1) % m])).collect(),
        };
        let boundary = match vertices.len() {
            0 => Vec::new(),
            1 => vertices.clone(),
            2 => edges[0].points.clone(),
            _ => edges.iter().flat_map(|e| e.points[..e.points.len() - 1].iter().copied()).collect(),
        };
        let area2 = area2(&vertices);
        let interior = if vertices.len() < 3 { Vec::new() } else { interior_points(&vertices) };
        let poly = Self { vertices, edges, boundary, interior, area2 };
        if poly.vertices.len() >= 3 {
            assert_eq!(poly.area2, poly.pick_area2(), "Pick identity violated");
        }
        poly
    }

    /// `2 * (I + B/2 - 1)`, the area predicted by Pick's theorem.
    pub fn pick_area2(&self) -> i64 {
        2 * self.interior.len() as i64 + self.boundary.len() as i64 - 2
    }

    pub fn interior_count(&self) -> usize {
        self.interior.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Whether `p` lies in the closed polygon.
    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == p,
            2 => self.edges[0].points.contains(&p),
            m => (0..m).all(|k| cross(self.vertices[k], self.vertices[(k + 1) % m], p) >= 0),
        }
    }
}

/// The Newton polygon of `f`.
pub fn newton_polygon(f: &BivarPolynomial) -> Result<LatticePolygon> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    Ok(LatticePolygon::from_points(&f.support()))
}

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone chain; collinear points are dropped.
fn hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // all points collinear: keep the two ends
    if lower.len() == 2 || area2(&lower) == 0 {
        return alloc::vec![pts[0], pts[pts.len() - 1]];
    }
    lower
}

fn edge(from: LatticePoint, to: LatticePoint) -> LatticeEdge {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let d = dx.gcd(&dy);
    let direction = (dx / d, dy / d);
    let points = (0..=d).map(|t| (from.0 + t * direction.0, from.1 + t * direction.1)).collect();
    LatticeEdge { from, to, direction, points }
}

fn area2(vs: &[LatticePoint]) -> i64 {
    let m = vs.len();
    if m < 3 {
        return 0;
    }
    (0..m).map(|k| vs[k].0 * vs[(k + 1) % m].1 - vs[k].1 * vs[(k + 1) % m].0).sum()
}

fn interior_points(vs: &[LatticePoint]) -> Vec<LatticePoint> {
    let m = vs.len();
    let (x0, x1) = (vs.iter().map(|v| v.0).min().unwrap(), vs.iter().map(|v| v.0).max().unwrap());
    let (y0, y1) = (vs.iter().map(|v| v.1).min().unwrap(), vs.iter().map(|v| v.1).max().unwrap());
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            if (0..m).all(|k| cross(vs[k], vs[(k + 1) % m], (x, y)) > 0) {
                out.push((x, y));
            }
        }
    }
    out
}
