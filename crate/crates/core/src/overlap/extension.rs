use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::polygon::segments_meet_idx;
use super::OrientedPolygon;
use crate::{Error, Result};

/// Largest polygon handled by [`enumerate_extensions`].
pub const MAX_ENUMERATION_CORNERS: usize = 16;

/// Witness of an immersed-disk extension.
///
/// The disk is cut by corner-to-corner chords (`cuts`) into positively
/// oriented triangles; adjacent triangles are merged into `pieces` as long
/// as the merged piece stays embedded in the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionCertificate {
    /// Triangles `(i, k, j)` with `i < k < j`, each positively oriented.
    pub triangles: Vec<[usize; 3]>,
    /// Chords `(i, j)`, `i < j`, interior to the disk.
    pub cuts: Vec<(usize, usize)>,
    /// Embedded sub-disks, as counter-clockwise corner cycles.
    pub pieces: Vec<Vec<usize>>,
    /// Total angle of the extension at each corner.
    pub corner_angles: Vec<f64>,
    /// Number of sheets the corner angle spans: 1 for an unbranched corner.
    pub corner_multiplicity: Vec<u32>,
    /// Corner-to-corner geodesic chords of the flat disk; equal keys mean
    /// equivalent extensions.
    pub key: Vec<(usize, usize)>,
}

impl ExtensionCertificate {
    /// `sum(multiplicity - 1)`: zero for an unbranched extension.
    pub fn excess(&self) -> u32 {
        self.corner_multiplicity.iter().map(|m| m - 1).sum()
    }
}

/// Result of the self-overlap decision.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapDecision {
    pub self_overlapping: bool,
    pub turning: i64,
    pub certificate: Option<ExtensionCertificate>,
}

/// Decides whether `p` bounds an immersed disk, by the cubic interval
/// dynamic program over chords `(i, j)`: the sub-polygon `i..=j` closed by
/// the chord is triangulable by positive triangles iff some apex `k` makes
/// `(i, k, j)` positive with both halves triangulable.
pub fn is_self_overlapping(p: &OrientedPolygon) -> Result<OverlapDecision> {
    let m = p.len();
    let turning = p.turning_number();
    if turning != 1 {
        return Ok(OverlapDecision { self_overlapping: false, turning, certificate: None });
    }
    // apex[i][j]: chosen k, or usize::MAX if the interval is infeasible
    let none = usize::MAX;
    let mut apex = vec![vec![none; m]; m];
    let ok = |apex: &Vec<Vec<usize>>, i: usize, j: usize| j == i + 1 || apex[i][j] != none;
    for len in 2..m {
        for i in 0..m - len {
            let j = i + len;
            for k in i + 1..j {
                if p.orient(i, k, j) > 0 && ok(&apex, i, k) && ok(&apex, k, j) {
                    apex[i][j] = k;
                    break;
                }
            }
        }
    }
    if apex[0][m - 1] == none {
        return Ok(OverlapDecision { self_overlapping: false, turning, certificate: None });
    }
    let mut triangles = Vec::new();
    let mut stack = vec![(0, m - 1)];
    while let Some((i, j)) = stack.pop() {
        if j == i + 1 {
            continue;
        }
        let k = apex[i][j];
        triangles.push([i, k, j]);
        stack.push((i, k));
        stack.push((k, j));
    }
    let cert = certificate(p, triangles);
    Ok(OverlapDecision { self_overlapping: true, turning, certificate: Some(cert) })
}

#[derive(Clone)]
struct SubDisk {
    triangles: Vec<[usize; 3]>,
}

/// Enumerates pairwise inequivalent extensions, at most `limit` of them.
///
/// Sub-disks over each chord interval are kept up to equivalence (by their
/// geodesic chord sets); at most `limit` classes are kept per interval, so
/// the result is a lower bound on the number of extension classes when the
/// cap is hit.
pub fn enumerate_extensions(p: &OrientedPolygon, limit: usize) -> Result<Vec<ExtensionCertificate>> {
    enumerate(p, limit, false)
}

/// Like [`enumerate_extensions`], but corners may be branch points: the
/// total angle at a corner may exceed its interior angle by multiples of
/// `2 pi`. Requires a positive turning number.
pub fn enumerate_branched_extensions(p: &OrientedPolygon, limit: usize) -> Result<Vec<ExtensionCertificate>> {
    enumerate(p, limit, true)
}

fn enumerate(p: &OrientedPolygon, limit: usize, branched: bool) -> Result<Vec<ExtensionCertificate>> {
    let m = p.len();
    if m > MAX_ENUMERATION_CORNERS {
        return Err(Error::SizeLimit { got: m, limit: MAX_ENUMERATION_CORNERS });
    }
    let turning = p.turning_number();
    if limit == 0 || turning < 1 || (!branched && turning != 1) {
        return Ok(Vec::new());
    }
    let mut classes: Vec<Vec<Vec<SubDisk>>> = vec![vec![Vec::new(); m]; m];
    for i in 0..m - 1 {
        classes[i][i + 1].push(SubDisk { triangles: Vec::new() });
    }
    for len in 2..m {
        for i in 0..m - len {
            let j = i + len;
            let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
            let mut found = Vec::new();
            'apex: for k in i + 1..j {
                if p.orient(i, k, j) <= 0 {
                    continue;
                }
                for d1 in &classes[i][k] {
                    for d2 in &classes[k][j] {
                        let mut tris = Vec::with_capacity(d1.triangles.len() + d2.triangles.len() + 1);
                        tris.extend_from_slice(&d1.triangles);
                        tris.extend_from_slice(&d2.triangles);
                        tris.push([i, k, j]);
                        if !branched && [i, k, j].iter().any(|&v| fan_angle(p, &tris, v) >= 2.0 * PI - 1e-9) {
                            continue;
                        }
                        let key = geodesic_chords(p, i, j, &tris);
                        if seen.insert(key.clone()) {
                            found.push(SubDisk { triangles: tris });
                            if found.len() >= limit {
                                break 'apex;
                            }
                        }
                    }
                }
            }
            classes[i][j] = found;
        }
    }
    let roots = core::mem::take(&mut classes[0][m - 1]);
    Ok(roots.into_iter().map(|d| certificate(p, d.triangles)).collect())
}

/// Checks a certificate against the polygon: positive triangles forming a
/// triangulation of the abstract disk, whose corner angles agree with the
/// recorded multiplicities and add up to `(m - 2) pi`.
pub fn verify_certificate(p: &OrientedPolygon, cert: &ExtensionCertificate) -> bool {
    let m = p.len();
    if cert.triangles.len() + 2 != m {
        return false;
    }
    let mut edge_use: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in &cert.triangles {
        let [a, b, c] = *t;
        if !(a < b && b < c && c < m) || p.orient(a, b, c) <= 0 {
            return false;
        }
        for e in [(a, b), (b, c), (a, c)] {
            *edge_use.entry(e).or_default() += 1;
        }
    }
    for (&(a, b), &count) in &edge_use {
        let boundary = b == a + 1 || (a == 0 && b == m - 1);
        if count != if boundary { 1 } else { 2 } {
            return false;
        }
        if !boundary && chord_crosses_any(&edge_use, a, b) {
            return false;
        }
    }
    if edge_use.iter().filter(|(&(a, b), _)| b == a + 1 || (a == 0 && b == m - 1)).count() != m {
        return false;
    }
    if cert.corner_multiplicity.len() != m {
        return false;
    }
    let fans: Vec<f64> = (0..m).map(|v| fan_angle(p, &cert.triangles, v)).collect();
    let total: f64 = fans.iter().sum();
    fans.iter().enumerate().all(|(v, &fan)| {
        let mult = cert.corner_multiplicity[v];
        mult >= 1 && (fan - p.interior_angle(v) - 2.0 * PI * (mult - 1) as f64).abs() < 1e-9
    }) && (total - (m as f64 - 2.0) * PI).abs() < 1e-9 * m as f64
}

fn chord_crosses_any(edges: &BTreeMap<(usize, usize), usize>, a: usize, b: usize) -> bool {
    // combinatorial crossing of chords on the boundary circle
    edges.keys().any(|&(c, d)| (a < c && c < b && b < d) || (c < a && a < d && d < b))
}

/// Total angle of the triangles of `tris` at corner `v`.
fn fan_angle(p: &OrientedPolygon, tris: &[[usize; 3]], v: usize) -> f64 {
    tris.iter()
        .filter_map(|t| {
            let at = t.iter().position(|&x| x == v)?;
            Some(p.triangle_angle(v, t[(at + 1) % 3], t[(at + 2) % 3]))
        })
        .sum()
}

fn is_boundary(i: usize, j: usize, a: usize, b: usize) -> bool {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    b == a + 1 || (a == i && b == j)
}

/// Corner-to-corner chords `(a, b)` of the sub-polygon `i..=j` that run as
/// straight segments through the interior of the flat disk built from
/// `tris`, found by walking each segment across the triangulation. A chord
/// leaving a branched corner on several sheets is listed once per sheet.
fn geodesic_chords(p: &OrientedPolygon, i: usize, j: usize, tris: &[[usize; 3]]) -> Vec<(usize, usize)> {
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for (x, y) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])] {
            by_edge.entry((x.min(y), x.max(y))).or_default().push(t);
        }
    }
    let mut out = Vec::new();
    for a in i..=j {
        for b in a + 1..=j {
            if is_boundary(i, j, a, b) {
                continue;
            }
            for _ in 0..walk(p, i, j, tris, &by_edge, a, b) {
                out.push((a, b));
            }
        }
    }
    out
}

fn in_closed_triangle(p: &OrientedPolygon, t: [usize; 3], x: usize) -> bool {
    p.orient(t[0], t[1], x) >= 0 && p.orient(t[1], t[2], x) >= 0 && p.orient(t[2], t[0], x) >= 0
}

fn walk(
    p: &OrientedPolygon,
    i: usize,
    j: usize,
    tris: &[[usize; 3]],
    by_edge: &BTreeMap<(usize, usize), Vec<usize>>,
    a: usize,
    b: usize,
) -> usize {
    // every wedge of the fan at `a` containing the direction to b starts a
    // geodesic; an interior side is shared by two wedges, so along-side
    // directions are counted from the `u` side only
    let mut count = 0;
    for (t, tri) in tris.iter().enumerate() {
        let Some(at) = tri.iter().position(|&x| x == a) else { continue };
        let u = tri[(at + 1) % 3];
        let w = tri[(at + 2) % 3];
        let ou = p.orient(a, u, b);
        let ow = p.orient(a, b, w);
        if ou == 0 && p.dot_sign(a, u, b) > 0 {
            count += usize::from(u == b && !is_boundary(i, j, a, u));
            continue;
        }
        if ow == 0 && p.dot_sign(a, w, b) > 0 {
            continue;
        }
        if ou > 0 && ow > 0 && walk_from(p, i, j, tris, by_edge, a, b, t, u, w) {
            count += 1;
        }
    }
    count
}

#[allow(clippy::too_many_arguments)]
fn walk_from(
    p: &OrientedPolygon,
    i: usize,
    j: usize,
    tris: &[[usize; 3]],
    by_edge: &BTreeMap<(usize, usize), Vec<usize>>,
    a: usize,
    b: usize,
    mut cur: usize,
    mut right: usize,
    mut left: usize,
) -> bool {
    if in_closed_triangle(p, tris[cur], b) {
        return false;
    }
    for _ in 0..tris.len() {
        if is_boundary(i, j, right, left) {
            return false;
        }
        let key = (right.min(left), right.max(left));
        let Some(next) = by_edge[&key].iter().copied().find(|&t| t != cur) else {
            return false;
        };
        let tri = tris[next];
        let c = *tri.iter().find(|&&x| x != right && x != left).unwrap();
        if in_closed_triangle(p, tri, b) {
            return c == b;
        }
        match p.orient(a, b, c) {
            0 => return false,
            o if o > 0 => left = c,
            _ => right = c,
        }
        cur = next;
    }
    false
}

/// Builds the certificate for a positive triangulation of the whole polygon.
fn certificate(p: &OrientedPolygon, mut triangles: Vec<[usize; 3]>) -> ExtensionCertificate {
    let m = p.len();
    triangles.sort_unstable();
    let mut cuts: Vec<(usize, usize)> = triangles
        .iter()
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])])
        .filter(|&(a, b)| !is_boundary(0, m - 1, a, b))
        .collect();
    cuts.sort_unstable();
    cuts.dedup();

    // greedy merge of triangles across cuts while the union stays embedded
    let mut pieces: Vec<Option<Vec<usize>>> = triangles.iter().map(|t| Some(t.to_vec())).collect();
    let mut owner: Vec<usize> = (0..triangles.len()).collect();
    let find = |owner: &mut Vec<usize>, mut x: usize| {
        while owner[x] != x {
            owner[x] = owner[owner[x]];
            x = owner[x];
        }
        x
    };
    let mut remaining_cuts = Vec::new();
    for &(a, b) in &cuts {
        let sides: Vec<usize> =
            triangles.iter().enumerate().filter(|(_, t)| t.contains(&a) && t.contains(&b)).map(|(k, _)| k).collect();
        let (r1, r2) = (find(&mut owner, sides[0]), find(&mut owner, sides[1]));
        let merged = splice(pieces[r1].as_ref().unwrap(), pieces[r2].as_ref().unwrap(), a, b);
        match merged {
            Some(cycle) if cycle_is_simple(p, &cycle) => {
                owner[r2] = r1;
                pieces[r1] = Some(cycle);
                pieces[r2] = None;
            }
            _ => remaining_cuts.push((a, b)),
        }
    }
    let mut pieces: Vec<Vec<usize>> = pieces.into_iter().flatten().collect();
    for c in pieces.iter_mut() {
        let at = (0..c.len()).min_by_key(|&k| c[k]).unwrap();
        c.rotate_left(at);
    }
    pieces.sort();

    let corner_angles: Vec<f64> = (0..m).map(|v| fan_angle(p, &triangles, v)).collect();
    let corner_multiplicity = corner_angles
        .iter()
        .enumerate()
        .map(|(v, &total)| 1 + libm::round((total - p.interior_angle(v)) / (2.0 * PI)).max(0.0) as u32)
        .collect();
    let key = geodesic_chords(p, 0, m - 1, &triangles);
    ExtensionCertificate { triangles, cuts: remaining_cuts, pieces, corner_angles, corner_multiplicity, key }
}

/// Joins two counter-clockwise cycles sharing the edge `{a, b}`.
fn splice(c1: &[usize], c2: &[usize], a: usize, b: usize) -> Option<Vec<usize>> {
    let find_edge = |c: &[usize], x: usize, y: usize| (0..c.len()).find(|&k| c[k] == x && c[(k + 1) % c.len()] == y);
    let (c1, c2, x, y) = match (find_edge(c1, a, b), find_edge(c2, b, a)) {
        (Some(_), Some(_)) => (c1, c2, a, b),
        _ => match (find_edge(c1, b, a), find_edge(c2, a, b)) {
            (Some(_), Some(_)) => (c1, c2, b, a),
            _ => return None,
        },
    };
    // c1 traverses x -> y, c2 traverses y -> x
    let k1 = find_edge(c1, x, y)?;
    let k2 = find_edge(c2, y, x)?;
    let mut out = Vec::with_capacity(c1.len() + c2.len() - 2);
    // walk c1 from y around to x
    for s in 0..c1.len() {
        out.push(c1[(k1 + 1 + s) % c1.len()]);
    }
    // then c2 strictly between x and y
    for s in 2..c2.len() {
        out.push(c2[(k2 + s) % c2.len()]);
    }
    Some(out)
}

fn cycle_is_simple(p: &OrientedPolygon, cycle: &[usize]) -> bool {
    let n = cycle.len();
    let mut seen = BTreeSet::new();
    if !cycle.iter().all(|v| seen.insert(*v)) {
        return false;
    }
    for s in 0..n {
        for t in s + 1..n {
            if t == s + 1 || (s == 0 && t == n - 1) {
                continue;
            }
            if segments_meet_idx(p, cycle[s], cycle[(s + 1) % n], cycle[t], cycle[(t + 1) % n]) {
                return false;
            }
        }
    }
    true
}
