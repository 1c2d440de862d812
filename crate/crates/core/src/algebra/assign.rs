use alloc::vec::Vec;

use num_complex::Complex64;

/// A matching of old points to new points.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    /// `perm[i]` is the index in `new` matched to `old[i]`.
    pub perm: Vec<usize>,
    /// Largest matched distance.
    pub max_dist: f64,
    /// Sum of matched distances.
    pub cost: f64,
}

/// Minimal-cost assignment of `old` to `new` (sum of distances) together with
/// the cost of the runner-up assignment, by exhaustive search.
///
/// Intended for the small root counts of fiber curves (at most 8 points).
pub fn best_two_assignments(old: &[Complex64], new: &[Complex64]) -> (Assignment, f64) {
    assert_eq!(old.len(), new.len());
    assert!(old.len() <= 8, "exhaustive assignment limited to 8 points");
    let n = old.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut second = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let cost: f64 = p.iter().enumerate().map(|(i, &j)| (old[i] - new[j]).norm()).sum();
        match &best {
            Some((b, _)) if cost >= *b => {
                if cost < second {
                    second = cost;
                }
            }
            _ => {
                if let Some((b, _)) = &best {
                    second = *b;
                }
                best = Some((cost, p.to_vec()));
            }
        }
    });
    let (cost, perm) = best.unwrap_or((0.0, Vec::new()));
    let max_dist = perm.iter().enumerate().map(|(i, &j)| (old[i] - new[j]).norm()).fold(0.0, f64::max);
    (Assignment { perm, max_dist, cost }, second)
}

fn permute(p: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn matches_nearest() {
        let old = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 5.0)];
        let new = vec![Complex64::new(0.0, 5.1), Complex64::new(0.1, 0.0), Complex64::new(1.05, 0.0)];
        let (a, second) = best_two_assignments(&old, &new);
        assert_eq!(a.perm, vec![1, 2, 0]);
        assert!(second > 3.0 * a.cost);
    }
}
