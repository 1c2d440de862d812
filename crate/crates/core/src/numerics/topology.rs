use alloc::vec::Vec;

use num_complex::Complex64;

use super::curve::Curve;
use super::monodromy::{cycle_type, monodromy, MonodromyData};
use crate::algebra::poly_roots;
use crate::newton::BivarPolynomial;
use crate::{Error, Result};

/// Genus and number of ends of a fiber, read off its monodromy.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    pub g: usize,
    pub s: usize,
    /// Euler characteristic of the compactified fiber (Riemann–Hurwitz).
    pub chi_compact: i64,
    /// `d (1 - |Z|) + sum over special points of the affine points above them`.
    pub chi_affine: i64,
    /// Whether `chi_affine == 2 - 2g - s`.
    pub euler_ok: bool,
    /// Places lost to infinity above each special point, in loop order.
    pub escapes: Vec<usize>,
    pub monodromy: MonodromyData,
}

pub fn topological_invariants(f: &BivarPolynomial, xi: Complex64) -> Result<Topology> {
    let m = monodromy(f, xi)?;
    invariants_from(f, m)
}

/// Riemann–Hurwitz over the compactified `z`-line.
pub fn invariants_from(f: &BivarPolynomial, m: MonodromyData) -> Result<Topology> {
    if !m.is_transitive() {
        return Err(Error::Monodromy("monodromy is not transitive: the fiber is disconnected".into()));
    }
    let curve = Curve::new(f, m.xi)?;
    let d = m.degree as i64;
    let ramification = |p: &[usize]| d - cycle_type(p).len() as i64;
    let chi_compact = 2 * d - m.loops.iter().map(|l| ramification(&l.perm)).sum::<i64>() - ramification(&m.infinity);
    if chi_compact > 2 || (2 - chi_compact) % 2 != 0 {
        return Err(Error::Monodromy("Riemann–Hurwitz gives a non-integral genus".into()));
    }
    let g = ((2 - chi_compact) / 2) as usize;
    let mut escapes = Vec::with_capacity(m.loops.len());
    let mut places = 0i64;
    for l in &m.loops {
        let finite = distinct_roots(&curve, l.point.z)? as i64;
        places += finite;
        let cycles = cycle_type(&l.perm).len() as i64;
        escapes.push(if l.point.escape { (cycles - finite).max(0) as usize } else { 0 });
    }
    let s = cycle_type(&m.infinity).len() + escapes.iter().sum::<usize>();
    let chi_affine = d * (1 - m.loops.len() as i64) + places;
    let euler_ok = chi_affine == 2 - 2 * g as i64 - s as i64;
    Ok(Topology { g, s, chi_compact, chi_affine, euler_ok, escapes, monodromy: m })
}

/// Number of distinct finite roots of `F(c, .)`, dropping leading
/// coefficients that vanish at `c` up to rounding.
fn distinct_roots(curve: &Curve, c: Complex64) -> Result<usize> {
    let mut coeffs = curve.w_coeffs(c);
    let sizes: Vec<f64> = curve
        .exact()
        .coeffs
        .iter()
        .map(|q| {
            q.to_complex().iter().map(|a| a.norm()).sum::<f64>()
                * libm::pow(c.norm().max(1.0), q.degree().unwrap_or(0) as f64)
        })
        .collect();
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= 1e-9 * sizes[coeffs.len() - 1] {
        coeffs.pop();
    }
    let roots = poly_roots(&coeffs)?;
    let mut reps: Vec<Complex64> = Vec::new();
    for r in roots {
        if !reps.iter().any(|q| (q - r).norm() <= 1e-4 * r.norm().max(1.0)) {
            reps.push(r);
        }
    }
    Ok(reps.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(text: &str, xi: Complex64) -> Topology {
        topological_invariants(&BivarPolynomial::parse(text).unwrap(), xi).unwrap()
    }

    #[test]
    fn examples() {
        let c = |re, im| Complex64::new(re, im);
        let t = topo("z^3 + w^2 + 1", c(0.0, 0.0));
        assert_eq!((t.g, t.s), (1, 1));
        assert!(t.euler_ok);
        let t = topo("1 + z^2 + w^2 + z^2*w^2", c(0.3, 0.7));
        assert_eq!((t.g, t.s), (1, 4));
        assert!(t.euler_ok);
        let t = topo("1 + z^4 + w^3", c(0.2, -0.4));
        assert_eq!((t.g, t.s), (3, 1));
        assert!(t.euler_ok);
        let t = topo("z^2 + w^2", c(1.0, 0.0));
        assert_eq!((t.g, t.s), (0, 2));
        assert!(t.euler_ok);
    }
}
