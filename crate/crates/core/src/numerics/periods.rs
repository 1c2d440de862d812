use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::critical::{critical_values, VALUE_TOL};
use super::curve::{min_separation, Curve, Piece};
use crate::algebra::{best_two_assignments, poly_roots, GaussianRational};
use crate::grid::Grid;
use crate::newton::BivarPolynomial;
use crate::{Error, Result};

/// Contours closer than this (relative to `max(1, |p|)`) to a branch point
/// are refused.
pub const COLLISION_TOL: f64 = 1e-6;

const GL_ORDER: usize = 16;
const MAX_PANELS: usize = 1 << 16;

/// A closed polyline in the `z`-plane together with the sheet it starts on.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitCycle {
    /// Vertices; the last one is joined back to the first.
    pub path: Vec<Complex64>,
    /// `w` at `path[0]` on the first grid node; the nearest root is used.
    pub w0: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cycles {
    /// For `w`-degree 2: one cycle around each pair of consecutive branch
    /// points (sorted by real then imaginary part at the first grid node).
    Auto,
    Explicit(Vec<ExplicitCycle>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleLabel {
    /// Encircles branch points `a` and `b` (labels fixed at the first node).
    Pair(usize, usize),
    Explicit(usize),
}

/// Periods of the time form `dt = -dz / F_w` tabulated over a grid of
/// fiber values.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodSample {
    pub grid: Grid,
    pub cycles: Vec<CycleLabel>,
    /// `periods[c][node]`, nodes in grid storage order.
    pub periods: Vec<Vec<Complex64>>,
    /// Labelled branch points per node (empty for explicit cycles).
    pub branch_points: Vec<Vec<Complex64>>,
}

impl PeriodSample {
    /// A sample from given fields, one per cycle.
    pub fn from_fields(grid: Grid, periods: Vec<Vec<Complex64>>) -> Result<Self> {
        if periods.iter().any(|p| p.len() != grid.len()) {
            return Err(Error::InvalidSample("period field does not match the grid".into()));
        }
        if periods.iter().flatten().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(Error::InvalidSample("non-finite period".into()));
        }
        let cycles = (0..periods.len()).map(CycleLabel::Explicit).collect();
        Ok(Self { grid, cycles, periods, branch_points: vec![Vec::new(); grid.len()] })
    }
}

#[derive(Clone, Debug)]
enum NodeJob {
    Pairs {
        // disc = F_w^2 as a polynomial in z
        disc: Vec<Complex64>,
        branch: Vec<Complex64>,
        singular: Vec<Complex64>,
    },
    Paths {
        curve: Curve,
        special: Vec<Complex64>,
        starts: Vec<Complex64>,
    },
}

/// Per-node integration jobs; nodes can be integrated independently.
#[derive(Clone, Debug)]
pub struct PeriodPlan {
    pub grid: Grid,
    pub cycles: Vec<CycleLabel>,
    paths: Vec<Vec<Complex64>>,
    jobs: Vec<NodeJob>,
    // breadth-first visiting order and parents, for sign continuity
    order: Vec<(usize, Option<usize>)>,
}

fn bfs(grid: &Grid) -> Vec<(usize, Option<usize>)> {
    let mut seen = vec![false; grid.len()];
    let mut out = Vec::with_capacity(grid.len());
    let mut queue = VecDeque::from([(0usize, 0usize, None)]);
    seen[0] = true;
    while let Some((i, j, parent)) = queue.pop_front() {
        let k = grid.index(i, j);
        out.push((k, parent));
        let mut push = |a: usize, b: usize| {
            let idx = grid.index(a, b);
            if !seen[idx] {
                seen[idx] = true;
                queue.push_back((a, b, Some(k)));
            }
        };
        if i + 1 < grid.nx {
            push(i + 1, j);
        }
        if j + 1 < grid.ny {
            push(i, j + 1);
        }
        if i > 0 {
            push(i - 1, j);
        }
        if j > 0 {
            push(i, j - 1);
        }
    }
    out
}

fn relabel(parent: &[Complex64], fresh: &[Complex64], what: &str) -> Result<Vec<Complex64>> {
    if parent.len() != fresh.len() {
        return Err(Error::Continuation(format!("number of {what} changes across the grid")));
    }
    if fresh.len() < 2 {
        return Ok(fresh.to_vec());
    }
    let (a, _) = best_two_assignments(parent, fresh);
    if a.max_dist >= min_separation(fresh) / 3.0 {
        return Err(Error::Continuation(format!("{what} jump between neighbouring grid nodes; refine the grid")));
    }
    Ok(a.perm.iter().map(|&j| fresh[j]).collect())
}

/// `F_w^2` for a curve of `w`-degree 2, with its branch points (odd
/// multiplicity roots) and all of its distinct roots.
fn hyper_data(curve: &Curve) -> Result<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> {
    let c = &curve.exact().coeffs;
    let disc = c[1].mul(&c[1]).sub(&c[2].mul(&c[0]).scale(&GaussianRational::from_int(4)));
    let mut branch = Vec::new();
    let mut singular = Vec::new();
    for (k, factor) in disc.squarefree_decomposition() {
        let roots = poly_roots(&factor.to_complex())?;
        if k % 2 == 1 {
            branch.extend_from_slice(&roots);
        }
        singular.extend(roots);
    }
    branch.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok((disc.to_complex(), branch, singular))
}

fn check_regular(f: &BivarPolynomial, grid: &Grid) -> Result<()> {
    let crit = critical_values(f)?;
    for xi in grid.nodes() {
        for &c in &crit {
            if (xi - c).norm() <= VALUE_TOL * c.norm().max(1.0) {
                return Err(Error::CriticalValue(format!("grid node {xi} is the critical value {c}")));
            }
        }
    }
    Ok(())
}

pub fn plan_periods(f: &BivarPolynomial, grid: &Grid, cycles: &Cycles) -> Result<PeriodPlan> {
    check_regular(f, grid)?;
    let order = bfs(grid);
    let mut jobs: Vec<Option<NodeJob>> = vec![None; grid.len()];
    let mut labels = Vec::new();
    let mut paths = Vec::new();
    for &(k, parent) in &order {
        let curve = Curve::new(f, grid.nodes()[k])?;
        let job = match cycles {
            Cycles::Auto => {
                if curve.degree() != 2 {
                    return Err(Error::Mismatch(format!(
                        "automatic cycles need w-degree 2, got {}; supply explicit cycles",
                        curve.degree()
                    )));
                }
                let (disc, fresh, singular) = hyper_data(&curve)?;
                let branch = match parent.and_then(|p| jobs[p].as_ref()) {
                    Some(NodeJob::Pairs { branch, .. }) => relabel(branch, &fresh, "branch points")?,
                    _ => {
                        if fresh.len() < 2 {
                            return Err(Error::Mismatch(
                                "fewer than two finite branch points; supply explicit cycles".into(),
                            ));
                        }
                        labels = (1..fresh.len()).map(|b| CycleLabel::Pair(b - 1, b)).collect();
                        fresh
                    }
                };
                NodeJob::Pairs { disc, branch, singular }
            }
            Cycles::Explicit(list) => {
                let special = curve.special_points()?.into_iter().map(|p| p.z).collect();
                let starts = match parent.and_then(|p| jobs[p].as_ref()) {
                    Some(NodeJob::Paths { starts, .. }) => {
                        let mut out = Vec::with_capacity(starts.len());
                        for (cycle, &prev) in list.iter().zip(starts) {
                            out.push(nearest_root(&curve, cycle.path[0], prev)?);
                        }
                        out
                    }
                    _ => {
                        labels = (0..list.len()).map(CycleLabel::Explicit).collect();
                        paths = list.iter().map(|c| c.path.clone()).collect();
                        if list.iter().any(|c| c.path.len() < 2) {
                            return Err(Error::InvalidSample("a cycle needs at least two vertices".into()));
                        }
                        list.iter().map(|c| nearest_root(&curve, c.path[0], c.w0)).collect::<Result<_>>()?
                    }
                };
                NodeJob::Paths { curve, special, starts }
            }
        };
        jobs[k] = Some(job);
    }
    Ok(PeriodPlan {
        grid: *grid,
        cycles: labels,
        paths,
        jobs: jobs.into_iter().map(|j| j.expect("every node visited")).collect(),
        order,
    })
}

fn nearest_root(curve: &Curve, z: Complex64, w: Complex64) -> Result<Complex64> {
    let roots = curve.roots(z)?;
    let best =
        roots.iter().copied().min_by(|a, b| (a - w).norm().total_cmp(&(b - w).norm())).ok_or(Error::RootFinding)?;
    if roots.len() > 1 && (best - w).norm() >= min_separation(&roots) / 3.0 {
        return Err(Error::Continuation(format!("starting sheet at z = {z} is ambiguous")));
    }
    Ok(best)
}

impl PeriodPlan {
    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    /// Periods at grid node `node`, one per cycle, before sign alignment.
    pub fn integrate(&self, node: usize) -> Result<Vec<Complex64>> {
        match &self.jobs[node] {
            NodeJob::Pairs { disc, branch, singular } => self
                .cycles
                .iter()
                .map(|label| match *label {
                    CycleLabel::Pair(a, b) => ellipse_period(disc, branch[a], branch[b], singular, None),
                    CycleLabel::Explicit(_) => unreachable!("explicit label in an automatic plan"),
                })
                .collect(),
            NodeJob::Paths { curve, special, starts } => {
                self.paths.iter().zip(starts).map(|(path, &w)| path_period(curve, special, path, w)).collect()
            }
        }
    }

    /// Aligns signs of automatic cycles along the grid and assembles the sample.
    pub fn finish(&self, raw: Vec<Vec<Complex64>>) -> Result<PeriodSample> {
        if raw.len() != self.len() {
            return Err(Error::Mismatch(format!("expected {} nodes of periods", self.len())));
        }
        let mut values = raw;
        if matches!(self.jobs.first(), Some(NodeJob::Pairs { .. })) {
            for &(k, parent) in &self.order {
                let Some(p) = parent else { continue };
                for c in 0..self.cycles.len() {
                    let prev = values[p][c];
                    if (values[k][c] + prev).norm() < (values[k][c] - prev).norm() {
                        values[k][c] = -values[k][c];
                    }
                }
            }
        }
        let periods = (0..self.cycles.len()).map(|c| values.iter().map(|v| v[c]).collect()).collect();
        let branch_points = self
            .jobs
            .iter()
            .map(|j| match j {
                NodeJob::Pairs { branch, .. } => branch.clone(),
                NodeJob::Paths { .. } => Vec::new(),
            })
            .collect();
        Ok(PeriodSample { grid: self.grid, cycles: self.cycles.clone(), periods, branch_points })
    }
}

/// Sequential period computation over a grid.
pub fn periods(f: &BivarPolynomial, grid: &Grid, cycles: &Cycles) -> Result<PeriodSample> {
    let plan = plan_periods(f, grid, cycles)?;
    let raw = (0..plan.len()).map(|k| plan.integrate(k)).collect::<Result<Vec<_>>>()?;
    plan.finish(raw)
}

/// Period over the cycle around branch points `e1`, `e2` of a `w`-degree 2
/// fiber, integrated over the ellipse with foci `e1`, `e2` and parameter
/// `eta` (chosen automatically when `None`).
pub fn hyperelliptic_period(
    f: &BivarPolynomial,
    xi: Complex64,
    e1: Complex64,
    e2: Complex64,
    eta: Option<f64>,
) -> Result<Complex64> {
    let curve = Curve::new(f, xi)?;
    if curve.degree() != 2 {
        return Err(Error::Mismatch("hyperelliptic periods need w-degree 2".into()));
    }
    let (disc, branch, singular) = hyper_data(&curve)?;
    let snap = |e: Complex64| {
        branch
            .iter()
            .copied()
            .find(|b| (b - e).norm() <= 1e-6 * b.norm().max(1.0))
            .ok_or_else(|| Error::Mismatch(format!("{e} is not a branch point")))
    };
    ellipse_period(&disc, snap(e1)?, snap(e2)?, &singular, eta)
}

/// On `z = m + c cos(theta + i eta)` one has `(z - e1)(z - e2) = -c^2 sin^2`,
/// so with `F_w = i c sin(theta + i eta) q(theta)` the time form becomes
/// `-i dtheta / q`, smooth and periodic.
fn ellipse_period(
    disc: &[Complex64],
    e1: Complex64,
    e2: Complex64,
    singular: &[Complex64],
    eta: Option<f64>,
) -> Result<Complex64> {
    let m = (e1 + e2) / 2.0;
    let c = (e2 - e1) / 2.0;
    let merged =
        |p: &Complex64| (p - e1).norm() <= 1e-9 * e1.norm().max(1.0) || (p - e2).norm() <= 1e-9 * e2.norm().max(1.0);
    // elliptic radius of the nearest other singularity
    let reach =
        singular.iter().filter(|p| !merged(p)).map(|&p| ((p - m) / c).acos().im.abs()).fold(f64::INFINITY, f64::min);
    if reach < COLLISION_TOL {
        return Err(Error::Collision(format!("a singular point lies on the segment [{e1}, {e2}]")));
    }
    let eta = match eta {
        Some(e) if e > 0.0 && e < reach => e,
        Some(e) => return Err(Error::Collision(format!("ellipse parameter {e} reaches a branch point"))),
        None => (0.5 * reach).min(1.0),
    };
    let width = eta.min(reach - eta);
    let panels = libm::ceil(2.0 * PI / width) as usize;
    if panels > MAX_PANELS {
        return Err(Error::Collision(format!("ellipse around [{e1}, {e2}] passes too close to a singular point")));
    }
    let rule = gauss_legendre(GL_ORDER);
    let h = 2.0 * PI / panels as f64;
    let q_at = |theta: f64| {
        let z = m + c * Complex64::new(theta, eta).cos();
        (super::curve::horner(disc, z) / ((z - e1) * (z - e2))).sqrt()
    };
    let q0 = q_at(0.0);
    let mut prev = q0;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for &(x, wt) in &rule {
            let mut q = q_at(mid + 0.5 * h * x);
            if (q + prev).norm() < (q - prev).norm() {
                q = -q;
            }
            prev = q;
            sum += wt * 0.5 * h / q;
        }
    }
    let mut end = q_at(2.0 * PI);
    if (end + prev).norm() < (end - prev).norm() {
        end = -end;
    }
    if (end - q0).norm() > 1e-6 * q0.norm() {
        return Err(Error::Collision(format!("the cycle around [{e1}, {e2}] does not close")));
    }
    Ok(-Complex64::i() * sum)
}

/// Period over an explicit closed polyline starting on the sheet through `w`.
pub fn cycle_period(f: &BivarPolynomial, xi: Complex64, cycle: &ExplicitCycle) -> Result<Complex64> {
    let curve = Curve::new(f, xi)?;
    if cycle.path.len() < 2 {
        return Err(Error::InvalidSample("a cycle needs at least two vertices".into()));
    }
    let special: Vec<Complex64> = curve.special_points()?.into_iter().map(|p| p.z).collect();
    let w = nearest_root(&curve, cycle.path[0], cycle.w0)?;
    path_period(&curve, &special, &cycle.path, w)
}

fn path_period(curve: &Curve, special: &[Complex64], path: &[Complex64], w: Complex64) -> Result<Complex64> {
    let dist = |z: Complex64| special.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
    let mut panels = Vec::new();
    for k in 0..path.len() {
        let (a, b) = (path[k], path[(k + 1) % path.len()]);
        if (b - a).norm() == 0.0 {
            continue;
        }
        for p in special {
            if segment_distance(*p, a, b) <= COLLISION_TOL * p.norm().max(1.0) {
                return Err(Error::Collision(format!("segment [{a}, {b}] meets the special point {p}")));
            }
        }
        // split until every panel is short compared with its distance to the special points
        let mut stack = vec![(a, b)];
        let mut pieces = Vec::new();
        while let Some((u, v)) = stack.pop() {
            if (v - u).norm() <= 0.5 * dist((u + v) / 2.0) {
                pieces.push((u, v));
            } else {
                if pieces.len() + stack.len() > MAX_PANELS {
                    return Err(Error::Collision("contour passes too close to a special point".into()));
                }
                let mid = (u + v) / 2.0;
                stack.push((mid, v));
                stack.push((u, mid));
            }
        }
        panels.extend(pieces);
    }
    let rule = gauss_legendre(GL_ORDER);
    let mut roots = curve.roots(path[0])?;
    let sheet = roots
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - w).norm().total_cmp(&(b.1 - w).norm()))
        .map(|(i, _)| i)
        .ok_or(Error::RootFinding)?;
    let start = roots[sheet];
    let mut here = path[0];
    let mut sum = Complex64::new(0.0, 0.0);
    for (u, v) in panels {
        let half = (v - u) / 2.0;
        let mid = (u + v) / 2.0;
        for &(x, wt) in &rule {
            let z = mid + half * x;
            roots = curve.track(&[Piece::Segment(here, z)], &roots)?;
            here = z;
            let (_, _, fw) = curve.eval(z, roots[sheet]);
            sum -= half * wt / fw;
        }
    }
    roots = curve.track(&[Piece::Segment(here, path[0])], &roots)?;
    let sep = min_separation(&roots);
    if (roots[sheet] - start).norm() >= sep / 3.0 {
        return Err(Error::Mismatch("the lifted path does not close on its sheet".into()));
    }
    Ok(sum)
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = ((p - a) * d.conj()).re / d.norm_sqr();
    (a + d * t.clamp(0.0, 1.0) - p).norm()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn agm(mut a: f64, mut b: f64) -> f64 {
        for _ in 0..40 {
            (a, b) = ((a + b) / 2.0, libm::sqrt(a * b));
        }
        a
    }

    #[test]
    fn quadrature_rule() {
        let r = gauss_legendre(16);
        let total: f64 = r.iter().map(|p| p.1).sum();
        assert!((total - 2.0).abs() < 1e-14);
        // exact for x^30
        let m: f64 = r.iter().map(|&(x, w)| w * libm::pow(x, 30.0)).sum();
        assert!((m - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn conic_period_is_pi() {
        let f = BivarPolynomial::parse("z^2 + w^2").unwrap();
        let grid = Grid::new(0.5, 1.5, -0.5, 0.5, 3, 3).unwrap();
        let s = periods(&f, &grid, &Cycles::Auto).unwrap();
        assert_eq!(s.cycles, vec![CycleLabel::Pair(0, 1)]);
        for p in &s.periods[0] {
            assert!((p.norm() - PI).abs() < 1e-12, "{p}");
        }
    }

    #[test]
    fn elliptic_periods_match_agm() {
        // w^2 = z^3 - z + xi: three real branch points for |xi| < 2/(3 sqrt 3)
        let f = BivarPolynomial::parse("w^2 - z^3 + z").unwrap();
        for xi in [-0.3, -0.1, 0.05, 0.2] {
            let grid = Grid::new(xi, xi + 0.01, -0.01, 0.01, 3, 3).unwrap();
            let s = periods(&f, &grid, &Cycles::Auto).unwrap();
            // node 1 is xi itself
            let e = &s.branch_points[1];
            let (e1, e2, e3) = (e[0].re, e[1].re, e[2].re);
            let p12 = PI / agm(libm::sqrt(e3 - e1), libm::sqrt(e3 - e2));
            let p23 = PI / agm(libm::sqrt(e3 - e1), libm::sqrt(e2 - e1));
            assert!((s.periods[0][1].norm() - p12).abs() < 1e-10 * p12);
            assert!((s.periods[1][1].norm() - p23).abs() < 1e-10 * p23);
        }
    }

    #[test]
    fn contour_independence() {
        let f = BivarPolynomial::parse("w^2 - z^3 + z").unwrap();
        let xi = c(0.1, 0.05);
        let curve = Curve::new(&f, xi).unwrap();
        let (_, b, _) = hyper_data(&curve).unwrap();
        let p1 = hyperelliptic_period(&f, xi, b[0], b[1], Some(0.1)).unwrap();
        let p2 = hyperelliptic_period(&f, xi, b[0], b[1], Some(0.4)).unwrap();
        assert!((p1 - p2).norm() < 1e-10, "{p1} {p2}");
        // the same cycle as an explicit polygon around both branch points
        let m = (b[0] + b[1]) / 2.0;
        let r = (b[1] - b[0]).norm() / 2.0 + 0.3;
        let path: Vec<_> = (0..12).map(|k| m + Complex64::from_polar(r, 2.0 * PI * k as f64 / 12.0)).collect();
        let w0 = curve.roots(path[0]).unwrap()[0];
        let p3 = cycle_period(&f, xi, &ExplicitCycle { path, w0 }).unwrap();
        assert!((p3.norm() - p1.norm()).abs() < 1e-9, "{p1} {p3}");
        assert!((p3 - p1).norm() < 1e-9 || (p3 + p1).norm() < 1e-9);
    }

    #[test]
    fn explicit_cycle_on_a_cubic_cover() {
        // w^3 = z - xi on a circle around the single branch point: the lift
        // does not close after one turn
        let f = BivarPolynomial::parse("w^3 - z").unwrap();
        let path: Vec<_> = (0..8).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0)).collect();
        let err = cycle_period(&f, c(0.1, 0.0), &ExplicitCycle { path, w0: c(1.0, 0.0) });
        assert!(matches!(err, Err(Error::Mismatch(_))));
    }

    #[test]
    fn errors() {
        let f = BivarPolynomial::parse("z^3 + w^2 + 1").unwrap();
        let grid = Grid::new(0.5, 1.5, -0.5, 0.5, 3, 3).unwrap();
        assert!(matches!(periods(&f, &grid, &Cycles::Auto), Err(Error::CriticalValue(_))));
        let f = BivarPolynomial::parse("z^2 + w^2").unwrap();
        let path = vec![c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 0.0)];
        let cyc = ExplicitCycle { path, w0: c(1.27, 0.79) };
        let r = cycle_period(&f, c(1.0, 0.0), &cyc);
        assert!(matches!(r, Err(Error::Collision(_))), "{r:?}");
    }
}
