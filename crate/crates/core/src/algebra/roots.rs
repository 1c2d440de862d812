use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Horner evaluation of `p` (coefficients low to high) and its derivative.
pub fn eval_complex(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        dv = dv * x + v;
        v = v * x + c;
    }
    (v, dv)
}

/// A few Newton steps on a single root.
pub fn polish_root(p: &[Complex64], mut x: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (v, dv) = eval_complex(p, x);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        x -= step;
        if step.norm() <= 4.0 * f64::EPSILON * x.norm().max(1e-300) {
            break;
        }
    }
    x
}

/// All complex roots of `p` (coefficients low to high), by the
/// Aberth–Ehrlich simultaneous iteration.
///
/// Leading zero coefficients are ignored; exact zero roots are split off
/// first. Multiple roots are returned with multiplicity, at the reduced
/// accuracy intrinsic to them.
pub fn roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut p: Vec<Complex64> = p.to_vec();
    while p.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        p.pop();
    }
    if p.is_empty() {
        return Err(Error::RootFinding);
    }
    let mut out = Vec::new();
    let zeros = p.iter().take_while(|c| c.norm() == 0.0).count();
    out.extend(core::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    let p = &p[zeros..];
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(out);
    }
    if deg == 1 {
        out.push(-p[0] / p[1]);
        return Ok(out);
    }
    let lead = p[deg];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let dmonic: Vec<Complex64> = (1..=deg).map(|k| monic[k] * k as f64).collect();

    // Fujiwara-style radius for the initial circle.
    let mut radius: f64 = 0.0;
    for k in 0..deg {
        let r = libm::pow(monic[k].norm(), 1.0 / (deg - k) as f64);
        radius = radius.max(r);
    }
    let radius = (2.0 * radius).max(1e-12);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, theta)
        })
        .collect();
    let mut done = vec![false; deg];
    for _ in 0..800 {
        let mut all = true;
        for i in 0..deg {
            if done[i] {
                continue;
            }
            let (v, _) = eval_complex(&monic, z[i]);
            let dv = eval_plain(&dmonic, z[i]);
            if v.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = v / dv;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[i] -= w;
            if w.norm() <= 2.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    if z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(Error::RootFinding);
    }
    for r in z.iter_mut() {
        *r = polish_root(&monic, *r);
    }
    out.extend(z);
    Ok(out)
}

fn eval_plain(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close_sets(mut a: Vec<Complex64>, mut b: Vec<Complex64>, tol: f64) -> bool {
        a.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
        b.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn cubic_roots_of_unity() {
        let r = roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        assert!(close_sets(r, vec![c(1.0, 0.0), c(-0.5, s3), c(-0.5, -s3)], 1e-13));
    }

    #[test]
    fn product_of_known_roots() {
        let want = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.25, -1.0), c(2.0, 2.0), c(-1.0, -1.0)];
        let mut p = vec![c(1.0, 0.0)];
        for r in &want {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                q[k + 1] += a;
                q[k] -= a * r;
            }
            p = q;
        }
        assert!(close_sets(roots(&p).unwrap(), want, 1e-10));
    }

    #[test]
    fn zero_roots_split_off() {
        let r = roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(close_sets(r, vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)], 1e-13));
    }
}
