use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::critical::{critical_values, VALUE_TOL};
use super::curve::{min_separation, Curve, Piece, SpecialPoint};
use crate::algebra::best_two_assignments;
use crate::newton::BivarPolynomial;
use crate::{Error, Result};

/// A permutation of sheets: `perm[i]` is where sheet `i` ends up.
pub type Perm = Vec<usize>;

/// Monodromy of one lasso around a special point.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopMonodromy {
    pub point: SpecialPoint,
    /// Radius of the small circle of the lasso.
    pub radius: f64,
    pub perm: Perm,
}

/// Sheet permutations of the projection `(z, w) -> z` of the fiber `f = xi`.
///
/// Loops are listed in the order in which the big counter-clockwise circle
/// through the base point factors into them, so
/// `infinity . loops[last] . ... . loops[0] = id`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyData {
    pub xi: Complex64,
    pub degree: usize,
    pub base_point: Complex64,
    /// Sheets, labelled by sorting the roots over the base point.
    pub base_roots: Vec<Complex64>,
    pub loops: Vec<LoopMonodromy>,
    /// Monodromy around infinity (the big circle, traversed clockwise).
    pub infinity: Perm,
}

impl MonodromyData {
    /// `loops[last] . ... . loops[0]`.
    pub fn product(&self) -> Perm {
        let mut acc: Perm = (0..self.degree).collect();
        for l in &self.loops {
            acc = compose(&l.perm, &acc);
        }
        acc
    }

    /// Whether the loops act transitively on the sheets (connected fiber).
    pub fn is_transitive(&self) -> bool {
        let mut seen = alloc::vec![false; self.degree];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for l in &self.loops {
                let j = l.perm[i];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `(a . b)[i] = a[b[i]]`: apply `b` first.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut out = alloc::vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Cycle lengths, sorted decreasingly.
pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = alloc::vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Paths and starting data for the monodromy computation; each loop can be
/// tracked independently.
#[derive(Clone, Debug)]
pub struct MonodromyPlan {
    pub curve: Curve,
    pub xi: Complex64,
    pub base_point: Complex64,
    pub base_roots: Vec<Complex64>,
    /// Special point, lasso radius and lasso path, in product order.
    pub loops: Vec<(SpecialPoint, f64, Vec<Piece>)>,
    /// The counter-clockwise circle through the base point.
    pub big_loop: Vec<Piece>,
}

pub fn plan_monodromy(f: &BivarPolynomial, xi: Complex64) -> Result<MonodromyPlan> {
    let curve = Curve::new(f, xi)?;
    for c in critical_values(f)? {
        if (c - xi).norm() <= VALUE_TOL * c.norm().max(1.0) {
            return Err(Error::CriticalValue(format!("xi = {xi} is the critical value {c}")));
        }
    }
    let special = curve.special_points()?;
    let reach = special.iter().map(|p| p.z.norm()).fold(0.0, f64::max);
    let big_r = 2.0 * reach + 1.0;
    let radii: Vec<f64> = special
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let near = special
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, q)| (q.z - p.z).norm())
                .fold(f64::INFINITY, f64::min);
            if near.is_finite() {
                0.25 * near
            } else {
                0.5
            }
        })
        .collect();

    // base point on the big circle, near the bottom, keeping the lasso
    // segments clear of the other small discs
    let mut best: Option<(f64, Complex64)> = None;
    for c in 0..17 {
        let offset = if c % 2 == 0 { c as f64 / 2.0 } else { -((c + 1) as f64) / 2.0 };
        let b = Complex64::from_polar(big_r, -PI / 2.0 + 0.045 * offset);
        let mut score = f64::INFINITY;
        for (j, p) in special.iter().enumerate() {
            for (k, q) in special.iter().enumerate() {
                if j != k {
                    score = score.min(segment_distance(q.z, b, p.z) - radii[k]);
                }
            }
        }
        if best.is_none_or(|(s, _)| score > s * 1.5) {
            best = Some((score, b));
        }
    }
    let base_point = best.map(|(_, b)| b).unwrap_or(Complex64::new(0.0, -big_r));
    let tangent = Complex64::i() * base_point / base_point.norm();
    let mut order: Vec<usize> = (0..special.len()).collect();
    let angle = |j: usize| {
        let d = (special[j].z - base_point) / tangent;
        libm::atan2(d.im, d.re)
    };
    order.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    let loops = order
        .into_iter()
        .map(|j| {
            let p = special[j].z;
            let u = (base_point - p) / (base_point - p).norm();
            let touch = p + u * radii[j];
            let path = alloc::vec![
                Piece::Segment(base_point, touch),
                Piece::circle_through(p, touch),
                Piece::Segment(touch, base_point),
            ];
            (special[j], radii[j], path)
        })
        .collect();
    let mut base_roots = curve.roots(base_point)?;
    base_roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    if base_roots.len() != curve.degree() {
        return Err(Error::Continuation("base point lies over a degenerate fiber".into()));
    }
    let big_loop = alloc::vec![Piece::circle_through(Complex64::new(0.0, 0.0), base_point)];
    Ok(MonodromyPlan { curve, xi, base_point, base_roots, loops, big_loop })
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = ((p - a) * d.conj()).re / d.norm_sqr();
    (a + d * t.clamp(0.0, 1.0) - p).norm()
}

impl MonodromyPlan {
    /// Number of independent tracking jobs: every lasso plus the big circle.
    pub fn jobs(&self) -> usize {
        self.loops.len() + 1
    }

    /// Tracks job `idx` (the big circle is the last job).
    pub fn track(&self, idx: usize) -> Result<Perm> {
        let path = if idx < self.loops.len() { &self.loops[idx].2 } else { &self.big_loop };
        let end = self.curve.track(path, &self.base_roots).map_err(|e| match e {
            Error::Continuation(msg) => Error::Continuation(format!("loop {idx}: {msg}")),
            other => other,
        })?;
        let (a, _) = best_two_assignments(&end, &self.base_roots);
        if a.max_dist > min_separation(&self.base_roots) / 3.0 {
            return Err(Error::Continuation(format!("loop {idx} does not return to the base fiber")));
        }
        Ok(a.perm)
    }

    /// Assembles the tracked permutations, checking the product relation.
    pub fn finish(&self, perms: Vec<Perm>) -> Result<MonodromyData> {
        if perms.len() != self.jobs() {
            return Err(Error::Mismatch(format!("expected {} permutations", self.jobs())));
        }
        let big = perms[self.loops.len()].clone();
        let data = MonodromyData {
            xi: self.xi,
            degree: self.curve.degree(),
            base_point: self.base_point,
            base_roots: self.base_roots.clone(),
            loops: self
                .loops
                .iter()
                .zip(perms)
                .map(|((point, radius, _), perm)| LoopMonodromy { point: *point, radius: *radius, perm })
                .collect(),
            infinity: inverse(&big),
        };
        if data.product() != big {
            return Err(Error::Monodromy(format!(
                "product of loop permutations {:?} differs from the big circle {:?}",
                data.product(),
                big
            )));
        }
        Ok(data)
    }
}

/// Sequential monodromy computation.
pub fn monodromy(f: &BivarPolynomial, xi: Complex64) -> Result<MonodromyData> {
    let plan = plan_monodromy(f, xi)?;
    let perms = (0..plan.jobs()).map(|k| plan.track(k)).collect::<Result<Vec<_>>>()?;
    plan.finish(perms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mono(text: &str, xi: Complex64) -> MonodromyData {
        monodromy(&BivarPolynomial::parse(text).unwrap(), xi).unwrap()
    }

    #[test]
    fn circle() {
        let m = mono("z^2 + w^2", Complex64::new(1.0, 0.0));
        assert_eq!(m.loops.len(), 2);
        assert!(m.loops.iter().all(|l| l.perm == vec![1, 0]));
        assert_eq!(m.infinity, vec![0, 1]);
        assert!(m.is_transitive());
    }

    #[test]
    fn cubic_infinity_is_ramified() {
        let m = mono("z^3 + w^2 + 1", Complex64::new(0.0, 0.0));
        assert_eq!(m.loops.len(), 3);
        assert_eq!(m.infinity, vec![1, 0]);
    }

    #[test]
    fn noncommuting_transpositions() {
        // w^3 - 3w + z: simple branch points z = +-2 with different transpositions
        let m = mono("w^3 - 3*w + z", Complex64::new(0.25, 0.1));
        assert_eq!(m.loops.len(), 2);
        assert_ne!(m.loops[0].perm, m.loops[1].perm);
        assert_eq!(cycle_type(&m.infinity), vec![3]);
    }

    #[test]
    fn critical_fiber_is_refused() {
        let f = BivarPolynomial::parse("z^3 + w^2 + 1").unwrap();
        assert!(matches!(monodromy(&f, Complex64::new(1.0, 0.0)), Err(Error::CriticalValue(_))));
    }
}
