use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{poly_roots, resultant_in_w};
use crate::newton::BivarPolynomial;
use crate::{Error, Result};

/// Relative tolerance for merging critical values.
pub const VALUE_TOL: f64 = 1e-8;

/// The values of `f` at the common zeros of `f_z` and `f_w`.
///
/// The `z`-coordinates are the roots of `Res_w(f_z, f_w)`; over each, the
/// `w`-coordinates are the roots of whichever partial does not vanish
/// identically there, kept if the other partial also vanishes.
pub fn critical_values(f: &BivarPolynomial) -> Result<Vec<Complex64>> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let fz = f.partial_z();
    let fw = f.partial_w();
    let (pz, pw) = (fz.to_zw(), fw.to_zw());
    if pz.is_zero() || pw.is_zero() {
        // f depends on one variable only: critical lines or no critical points
        let other = if pz.is_zero() { &fw } else { &fz };
        return if other.is_constant() { Ok(Vec::new()) } else { Err(Error::NonIsolated) };
    }
    let res = resultant_in_w(&pz, &pw);
    if res.is_zero() {
        return Err(Error::NonIsolated);
    }
    let mut values: Vec<Complex64> = Vec::new();
    if res.degree().unwrap_or(0) == 0 {
        return Ok(values);
    }
    for z in poly_roots(&res.squarefree().to_complex())? {
        let cz = pz.coeffs_at(z);
        let cw = pw.coeffs_at(z);
        let small = |c: &[Complex64]| c.iter().all(|v| v.norm() <= 1e-12 * (1.0 + z.norm()));
        let (zero_z, zero_w) = (small(&cz), small(&cw));
        if zero_z && zero_w {
            return Err(Error::NonIsolated);
        }
        let solve = if zero_z || (!zero_w && cw.len() < cz.len()) { &cw } else { &cz };
        for w in poly_roots(solve)? {
            let (z, w) = refine(&fz, &fw, z, w);
            let ok = |p: &BivarPolynomial| p.eval(z, w).norm() <= 1e-7 * p.abs_eval(z, w).max(1.0);
            if ok(&fz) && ok(&fw) {
                let v = f.eval(z, w);
                if !values.iter().any(|u| (u - v).norm() <= VALUE_TOL * u.norm().max(1.0)) {
                    values.push(v);
                }
            }
        }
    }
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(values)
}

/// Newton on `(f_z, f_w) = 0` from a nearby point; returns the start when
/// the Jacobian is singular or the iteration does not improve.
fn refine(fz: &BivarPolynomial, fw: &BivarPolynomial, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
    let (fzz, fzw, fww) = (fz.partial_z(), fz.partial_w(), fw.partial_w());
    let (mut z1, mut w1) = (z, w);
    let size = |z: Complex64, w: Complex64| fz.eval(z, w).norm() + fw.eval(z, w).norm();
    let start = size(z, w);
    for _ in 0..20 {
        let (a, b) = (fzz.eval(z1, w1), fzw.eval(z1, w1));
        let d = fww.eval(z1, w1);
        let det = a * d - b * b;
        if det.norm() == 0.0 {
            break;
        }
        let (g1, g2) = (fz.eval(z1, w1), fw.eval(z1, w1));
        let dz = (d * g1 - b * g2) / det;
        let dw = (a * g2 - b * g1) / det;
        z1 -= dz;
        w1 -= dw;
        if dz.norm() + dw.norm() <= 1e-15 * (1.0 + z1.norm() + w1.norm()) {
            break;
        }
    }
    if size(z1, w1) <= start && (z1 - z).norm() < 1e-3 * (1.0 + z.norm()) {
        (z1, w1)
    } else {
        (z, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cv(text: &str) -> Result<Vec<Complex64>> {
        critical_values(&BivarPolynomial::parse(text).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(cv("z*w").unwrap(), vec![Complex64::new(0.0, 0.0)]);
        let v = cv("z^3 + w^2 + 1").unwrap();
        assert_eq!(v.len(), 1);
        assert!((v[0] - 1.0).norm() < 1e-12);
        let v = cv("z^2 + w^2").unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].norm() < 1e-12);
    }

    #[test]
    fn several_values() {
        // f = w^2 + z^3 - 3z: critical points (+-1, 0) with values -+2
        let v = cv("w^2 + z^3 - 3*z").unwrap();
        assert_eq!(v.len(), 2);
        assert!((v[0] + 2.0).norm() < 1e-10 && (v[1] - 2.0).norm() < 1e-10);
        // 1 + z^2 + w^2 + z^2 w^2 = (1 + z^2)(1 + w^2): critical points (0,0), (+-i, +-i)
        let v = cv("1 + z^2 + w^2 + z^2*w^2").unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().any(|x| x.norm() < 1e-10) && v.iter().any(|x| (x - 1.0).norm() < 1e-10));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(cv("z^2"), Err(Error::NonIsolated)));
        assert!(cv("z + w^2").unwrap().is_empty());
        assert!(BivarPolynomial::parse("(w + z)^2").is_err());
        assert!(matches!(cv("w^2 + 2*z*w + z^2"), Err(Error::NonIsolated)));
    }
}
