use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::exact::{on_segment, orient, QPoint};
use crate::{Error, Result};

/// A closed polygonal line given by its corners, with the genericity the
/// extension algorithms rely on:
///
/// * at least 3 corners, consecutive corners distinct;
/// * no corner where the line goes straight on or doubles back;
/// * no corner lies on a non-adjacent side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedPolygon {
    vertices: Vec<QPoint>,
    // the same points scaled to a common denominator
    ints: Vec<(BigInt, BigInt)>,
}

impl OrientedPolygon {
    pub fn new(vertices: Vec<QPoint>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::Genericity(format!("{m} corners, need at least 3")));
        }
        for i in 0..m {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % m]);
            if a == b {
                return Err(Error::Genericity(format!("corners {i} and {} coincide", (i + 1) % m)));
            }
        }
        for i in 0..m {
            let prev = &vertices[(i + m - 1) % m];
            let cur = &vertices[i];
            let next = &vertices[(i + 1) % m];
            if orient(prev, cur, next) == 0 {
                return Err(Error::Genericity(format!("corner {i} is degenerate (adjacent sides are collinear)")));
            }
        }
        for v in 0..m {
            for e in 0..m {
                let e1 = (e + 1) % m;
                if v == e || v == e1 {
                    continue;
                }
                if on_segment(&vertices[v], &vertices[e], &vertices[e1]) {
                    return Err(Error::Genericity(format!("corner {v} lies on side {e}")));
                }
            }
        }
        let mut lcm = BigInt::one();
        for p in &vertices {
            lcm = lcm.lcm(p.x.denom()).lcm(p.y.denom());
        }
        let ints =
            vertices.iter().map(|p| (p.x.numer() * (&lcm / p.x.denom()), p.y.numer() * (&lcm / p.y.denom()))).collect();
        Ok(Self { vertices, ints })
    }

    /// Snaps floating corners to the `2^-40` grid, then validates.
    pub fn from_f64(points: &[(f64, f64)]) -> Result<Self> {
        let vs = points
            .iter()
            .map(|&(x, y)| QPoint::snapped(x, y).ok_or_else(|| Error::Genericity("non-finite coordinate".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vs)
    }

    /// Uses the exact dyadic values of the doubles.
    pub fn from_f64_exact(points: &[(f64, f64)]) -> Result<Self> {
        let vs = points
            .iter()
            .map(|&(x, y)| {
                QPoint::from_f64_exact(x, y).ok_or_else(|| Error::Genericity("non-finite coordinate".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vs)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[QPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &QPoint {
        &self.vertices[i % self.len()]
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.vertices.iter().map(QPoint::to_f64).collect()
    }

    pub fn reversed(&self) -> Self {
        let mut vs = self.vertices.clone();
        vs.reverse();
        let mut ints = self.ints.clone();
        ints.reverse();
        Self { vertices: vs, ints }
    }

    /// Orientation sign of corners `a, b, c`.
    pub fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        let (pa, pb, pc) = (&self.ints[a], &self.ints[b], &self.ints[c]);
        let v = (&pb.0 - &pa.0) * (&pc.1 - &pa.1) - (&pb.1 - &pa.1) * (&pc.0 - &pa.0);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sign of `(p_b - p_a) . (p_c - p_a)`.
    pub fn dot_sign(&self, a: usize, b: usize, c: usize) -> i8 {
        let (pa, pb, pc) = (&self.ints[a], &self.ints[b], &self.ints[c]);
        let v = (&pb.0 - &pa.0) * (&pc.0 - &pa.0) + (&pb.1 - &pa.1) * (&pc.1 - &pa.1);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Signed turning angle at corner `i`, in `(-pi, pi)`.
    pub fn turn_angle(&self, i: usize) -> f64 {
        let m = self.len();
        let (ax, ay) = self.vertices[(i + m - 1) % m].to_f64();
        let (bx, by) = self.vertices[i].to_f64();
        let (cx, cy) = self.vertices[(i + 1) % m].to_f64();
        let (ux, uy) = (bx - ax, by - ay);
        let (vx, vy) = (cx - bx, cy - by);
        libm::atan2(ux * vy - uy * vx, ux * vx + uy * vy)
    }

    /// Interior angle at corner `i` (on the left of the traversal), in `(0, 2pi)`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        PI - self.turn_angle(i)
    }

    /// Angle of the triangle `(a, b, c)` at corner `a`.
    pub fn triangle_angle(&self, a: usize, b: usize, c: usize) -> f64 {
        let (ax, ay) = self.vertices[a].to_f64();
        let (bx, by) = self.vertices[b].to_f64();
        let (cx, cy) = self.vertices[c].to_f64();
        let (ux, uy) = (bx - ax, by - ay);
        let (vx, vy) = (cx - ax, cy - ay);
        libm::atan2((ux * vy - uy * vx).abs(), ux * vx + uy * vy)
    }

    /// Total signed curvature divided by `2pi`.
    pub fn turning_number(&self) -> i64 {
        let total: f64 = (0..self.len()).map(|i| self.turn_angle(i)).sum();
        libm::round(total / (2.0 * PI)) as i64
    }

    /// Whether the polygon is simple (its sides meet only at shared corners).
    pub fn is_simple(&self) -> bool {
        let m = self.len();
        for i in 0..m {
            for j in i + 1..m {
                if j == i + 1 || (i == 0 && j == m - 1) {
                    continue;
                }
                if self.sides_meet(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// Twice the signed area.
    pub fn signed_area2(&self) -> num_rational::BigRational {
        let m = self.len();
        let mut acc = num_rational::BigRational::zero();
        for i in 0..m {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % m]);
            acc += &a.x * &b.y - &a.y * &b.x;
        }
        acc
    }

    /// Whether sides `i` and `j` (closed segments) share a point.
    pub fn sides_meet(&self, i: usize, j: usize) -> bool {
        let m = self.len();
        segments_meet_idx(self, i, (i + 1) % m, j, (j + 1) % m)
    }
}

/// Closed-segment intersection test on corner indices.
pub(crate) fn segments_meet_idx(p: &OrientedPolygon, a: usize, b: usize, c: usize, d: usize) -> bool {
    let o1 = p.orient(a, b, c);
    let o2 = p.orient(a, b, d);
    let o3 = p.orient(c, d, a);
    let o4 = p.orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    let on = |x: usize, s: usize, t: usize| p.orient(s, t, x) == 0 && p.dot_sign(x, s, t) <= 0;
    (o1 == 0 && on(c, a, b)) || (o2 == 0 && on(d, a, b)) || (o3 == 0 && on(a, c, d)) || (o4 == 0 && on(b, c, d))
}
