use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{GaussianRational, QPoly};

/// Polynomial in `w` whose coefficients are polynomials in `z`;
/// `coeffs[k]` multiplies `w^k`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ZwPoly {
    pub coeffs: Vec<QPoly>,
}

impl ZwPoly {
    pub fn new(mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(QPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Degree in `w`; `None` when identically zero.
    pub fn degree_w(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> QPoly {
        self.coeffs.last().cloned().unwrap_or_else(QPoly::zero)
    }

    pub fn derivative_w(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&GaussianRational::from_int(k as i64)))
                .collect(),
        )
    }

    pub fn derivative_z(&self) -> Self {
        Self::new(self.coeffs.iter().map(QPoly::derivative).collect())
    }

    /// Numeric coefficients in `w` at a fixed `z`.
    pub fn coeffs_at(&self, z: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.eval_complex(z)).collect()
    }
}

/// Resultant with respect to `w`, as a polynomial in `z`.
///
/// Computed as the determinant of the Sylvester matrix by fraction-free
/// (Bareiss) elimination over Q(i)[z].
pub fn resultant_in_w(p: &ZwPoly, q: &ZwPoly) -> QPoly {
    let (Some(m), Some(n)) = (p.degree_w(), q.degree_w()) else {
        return QPoly::zero();
    };
    if m == 0 {
        return p.coeffs[0].pow(n);
    }
    if n == 0 {
        return q.coeffs[0].pow(m);
    }
    let size = m + n;
    let mut mat = vec![vec![QPoly::zero(); size]; size];
    // rows 0..n: shifted p (highest power first); rows n..n+m: shifted q
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + (m - k)] = p.coeffs[k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + (n - k)] = q.coeffs[k].clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut mat: Vec<Vec<QPoly>>) -> QPoly {
    let size = mat.len();
    let mut sign = false;
    let mut prev = QPoly::constant(GaussianRational::one());
    for k in 0..size {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return QPoly::zero();
            };
            mat.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = mat[k][k].mul(&mat[i][j]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = num.exact_div(&prev);
            }
            mat[i][k] = QPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> QPoly {
        QPoly::constant(GaussianRational::from_int(n))
    }

    fn zpoly(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|&x| GaussianRational::from_int(x)).collect())
    }

    #[test]
    fn resultant_of_linear_factors() {
        // p = w - z, q = w - 1: Res_w = (1 - z) up to sign convention z - 1
        let p = ZwPoly::new(vec![zpoly(&[0, -1]), c(1)]);
        let q = ZwPoly::new(vec![c(-1), c(1)]);
        let r = resultant_in_w(&p, &q);
        // Res(w-a, w-b) = b - a... with a = z, b = 1: product over roots of p of q = (z - 1)
        assert_eq!(r, zpoly(&[-1, 1]));
    }

    #[test]
    fn discriminant_of_circle() {
        // F = w^2 + z^2 - 1, F_w = 2w: Res = 4 (z^2 - 1) up to sign
        let f = ZwPoly::new(vec![zpoly(&[-1, 0, 1]), c(0), c(1)]);
        let r = resultant_in_w(&f, &f.derivative_w());
        assert_eq!(r, zpoly(&[-4, 0, 4]));
    }

    #[test]
    fn constant_in_w() {
        let p = ZwPoly::new(vec![zpoly(&[0, 0, 3])]);
        let q = ZwPoly::new(vec![c(0), c(2)]);
        assert_eq!(resultant_in_w(&p, &q), zpoly(&[0, 0, 3]));
    }
}
