use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::exact::{cross, QPoint};
use super::OrientedPolygon;

/// A face of the planar arrangement cut out by a closed polygonal line.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    /// Node indices around the face, with the face on the left.
    pub boundary: Vec<usize>,
    /// Winding number of the polygon around any point of the face.
    pub winding: i64,
    pub unbounded: bool,
    /// Signed area (negative for the unbounded face's outer cycle).
    pub area: f64,
}

/// The planar subdivision induced by a polygon's sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    /// Corners first (in polygon order), then self-crossings.
    pub nodes: Vec<QPoint>,
    pub faces: Vec<Face>,
}

impl Arrangement {
    pub fn bounded(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| !f.unbounded)
    }

    pub fn min_winding(&self) -> i64 {
        self.faces.iter().map(|f| f.winding).min().unwrap_or(0)
    }
}

struct HalfEdge {
    origin: usize,
    target: usize,
    // true when directed along the polygon's traversal
    forward: bool,
}

/// Computes the faces of the arrangement and their winding numbers.
///
/// Crossing points are exact rationals. The outer face has winding 0;
/// crossing a side from its right to its left raises the winding by one.
pub fn winding_faces(p: &OrientedPolygon) -> Arrangement {
    let m = p.len();
    let mut nodes: Vec<QPoint> = p.vertices().to_vec();
    let mut index: BTreeMap<QPoint, usize> = nodes.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();

    // split points along each side, keyed by the parameter t in [0, 1]
    let mut splits: Vec<Vec<(BigRational, usize)>> =
        (0..m).map(|i| vec![(BigRational::zero(), i), (BigRational::from_integer(1.into()), (i + 1) % m)]).collect();
    for i in 0..m {
        for j in i + 1..m {
            if j == i + 1 || (i == 0 && j == m - 1) {
                continue;
            }
            let (i1, j1) = ((i + 1) % m, (j + 1) % m);
            let o1 = p.orient(i, i1, j);
            let o2 = p.orient(i, i1, j1);
            let o3 = p.orient(j, j1, i);
            let o4 = p.orient(j, j1, i1);
            if !(o1 * o2 < 0 && o3 * o4 < 0) {
                continue;
            }
            let (a, b) = (p.vertex(i), p.vertex(i1));
            let (c, d) = (p.vertex(j), p.vertex(j1));
            let r = b.sub(a);
            let s = d.sub(c);
            let denom = cross(&r, &s);
            let t = cross(&c.sub(a), &s) / &denom;
            let u = cross(&c.sub(a), &r) / &denom;
            let pt = QPoint::new(&a.x + &r.0 * &t, &a.y + &r.1 * &t);
            let id = *index.entry(pt.clone()).or_insert_with(|| {
                nodes.push(pt);
                nodes.len() - 1
            });
            splits[i].push((t, id));
            splits[j].push((u, id));
        }
    }

    let mut half: Vec<HalfEdge> = Vec::new();
    for list in splits.iter_mut() {
        list.sort_by(|a, b| a.0.cmp(&b.0));
        list.dedup_by(|a, b| a.1 == b.1);
        for w in list.windows(2) {
            half.push(HalfEdge { origin: w[0].1, target: w[1].1, forward: true });
            half.push(HalfEdge { origin: w[1].1, target: w[0].1, forward: false });
        }
    }
    let twin = |h: usize| h ^ 1;

    // outgoing half-edges around each node, counter-clockwise
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (h, e) in half.iter().enumerate() {
        around[e.origin].push(h);
    }
    for (v, list) in around.iter_mut().enumerate() {
        let o = &nodes[v];
        list.sort_by(|&a, &b| angle_cmp(&nodes[half[a].target].sub(o), &nodes[half[b].target].sub(o)));
    }
    let mut pos_in_around = vec![0; half.len()];
    for list in &around {
        for (k, &h) in list.iter().enumerate() {
            pos_in_around[h] = k;
        }
    }
    let next = |h: usize| {
        let t = twin(h);
        let list = &around[half[h].target];
        let k = pos_in_around[t];
        list[(k + list.len() - 1) % list.len()]
    };

    let mut face_of = vec![usize::MAX; half.len()];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..half.len() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let f = cycles.len();
        let mut cycle = Vec::new();
        let mut h = start;
        loop {
            face_of[h] = f;
            cycle.push(h);
            h = next(h);
            if h == start {
                break;
            }
        }
        cycles.push(cycle);
    }

    let areas: Vec<BigRational> = cycles
        .iter()
        .map(|c| {
            c.iter().fold(BigRational::zero(), |acc, &h| {
                let (a, b) = (&nodes[half[h].origin], &nodes[half[h].target]);
                acc + (&a.x * &b.y - &a.y * &b.x)
            })
        })
        .collect();
    let outer = areas.iter().position(|a| a.is_negative()).expect("a closed curve always has an unbounded face");

    let mut winding = vec![None; cycles.len()];
    winding[outer] = Some(0i64);
    let mut queue = VecDeque::from([outer]);
    while let Some(f) = queue.pop_front() {
        let wf = winding[f].unwrap();
        for &h in &cycles[f] {
            let other = face_of[twin(h)];
            if winding[other].is_some() {
                continue;
            }
            // f lies left of h; the other face lies left of its twin
            let w = if half[h].forward { wf - 1 } else { wf + 1 };
            winding[other] = Some(w);
            queue.push_back(other);
        }
    }

    let faces = cycles
        .iter()
        .enumerate()
        .map(|(f, c)| Face {
            boundary: c.iter().map(|&h| half[h].origin).collect(),
            winding: winding[f].expect("arrangement of a closed curve is connected"),
            unbounded: f == outer,
            area: num_traits::ToPrimitive::to_f64(&areas[f]).unwrap_or(f64::NAN) / 2.0,
        })
        .collect();
    Arrangement { nodes, faces }
}

fn angle_cmp(u: &(BigRational, BigRational), v: &(BigRational, BigRational)) -> Ordering {
    let half = |d: &(BigRational, BigRational)| {
        if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(u).cmp(&half(v)).then_with(|| {
        let c = cross(u, v);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}
