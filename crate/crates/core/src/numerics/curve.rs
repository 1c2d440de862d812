//! The plane curve `F(z, w) = 0` as a branched cover of the `z`-line, and
//! continuation of its `w`-roots along paths.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{best_two_assignments, poly_roots, resultant_in_w, GaussianRational, QPoly, ZwPoly};
use crate::newton::BivarPolynomial;
use crate::{Error, Result};

/// Largest `w`-degree accepted by the numerical routines.
pub const MAX_W_DEGREE: usize = 6;

/// A path piece in the `z`-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Segment(Complex64, Complex64),
    /// `center + radius * e^{i(start + t * sweep)}`, `t` in `[0, 1]`.
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Piece {
    pub fn at(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Segment(a, b) => a + (b - a) * t,
            Piece::Arc { center, radius, start, sweep } => center + Complex64::from_polar(radius, start + t * sweep),
        }
    }

    /// `d z / d t`.
    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Segment(a, b) => b - a,
            Piece::Arc { radius, start, sweep, .. } => {
                Complex64::i() * Complex64::from_polar(radius * sweep, start + t * sweep)
            }
        }
    }

    /// Full circle around `center` starting and ending at `from`.
    pub fn circle_through(center: Complex64, from: Complex64) -> Self {
        let d = from - center;
        Piece::Arc { center, radius: d.norm(), start: libm::atan2(d.im, d.re), sweep: 2.0 * PI }
    }
}

/// `F(z, w) = f(z, w) - xi` with floating coefficient tables.
#[derive(Clone, Debug)]
pub struct Curve {
    exact: ZwPoly,
    // coef[m][l] multiplies w^m z^l
    coef: Vec<Vec<Complex64>>,
}

impl Curve {
    /// The fiber of `f` over `xi`; `xi` is used with its exact dyadic value.
    pub fn new(f: &BivarPolynomial, xi: Complex64) -> Result<Self> {
        let d = f.degree_w() as usize;
        if !(2..=MAX_W_DEGREE).contains(&d) {
            return Err(Error::Degree(d));
        }
        let shifted = f.minus_constant(&GaussianRational::from_complex(xi));
        let exact = shifted.to_zw();
        let coef = exact.coeffs.iter().map(QPoly::to_complex).collect();
        Ok(Self { exact, coef })
    }

    pub fn degree(&self) -> usize {
        self.coef.len() - 1
    }

    pub fn exact(&self) -> &ZwPoly {
        &self.exact
    }

    /// Coefficients of `F(z, .)`, low to high.
    pub fn w_coeffs(&self, z: Complex64) -> Vec<Complex64> {
        self.coef.iter().map(|row| horner(row, z)).collect()
    }

    /// `(F, F_z, F_w)` at `(z, w)`.
    pub fn eval(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64, Complex64) {
        let (mut f, mut fz, mut fw) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for row in self.coef.iter().rev() {
            let (v, dv) = horner_d(row, z);
            fw = fw * w + f;
            f = f * w + v;
            fz = fz * w + dv;
        }
        (f, fz, fw)
    }

    /// Size of the terms of `F` at `(z, w)`, for relative residuals.
    pub fn scale(&self, z: Complex64, w: Complex64) -> f64 {
        let (az, aw) = (z.norm(), w.norm());
        let mut s = 0.0;
        let mut wp = 1.0;
        for row in &self.coef {
            let mut zp = 1.0;
            for c in row {
                s += c.norm() * zp * wp;
                zp *= az;
            }
            wp *= aw;
        }
        s
    }

    pub fn roots(&self, z: Complex64) -> Result<Vec<Complex64>> {
        poly_roots(&self.w_coeffs(z))
    }

    /// `Res_w(F, F_w)`; vanishes identically iff `F` has a repeated factor.
    pub fn discriminant(&self) -> QPoly {
        resultant_in_w(&self.exact, &self.exact.derivative_w())
    }

    /// Branch points and zeros of the leading coefficient, deduplicated and
    /// sorted by real then imaginary part.
    pub fn special_points(&self) -> Result<Vec<SpecialPoint>> {
        let disc = self.discriminant();
        if disc.is_zero() {
            return Err(Error::CriticalValue("the fiber has a multiple component".into()));
        }
        let lead = self.exact.leading();
        let mut pts: Vec<SpecialPoint> = Vec::new();
        let mut add = |z: Complex64, escape: bool| {
            let tol = 1e-8 * z.norm().max(1.0);
            match pts.iter_mut().find(|p| (p.z - z).norm() <= tol) {
                Some(p) => p.escape |= escape,
                None => pts.push(SpecialPoint { z, escape }),
            }
        };
        if lead.degree().unwrap_or(0) > 0 {
            for z in poly_roots(&lead.squarefree().to_complex())? {
                add(z, true);
            }
        }
        if disc.degree().unwrap_or(0) > 0 {
            for z in poly_roots(&disc.squarefree().to_complex())? {
                add(z, false);
            }
        }
        pts.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
        Ok(pts)
    }

    /// Continues the roots `start` (at the start of the path) along the
    /// pieces; returns them at the end in the same order.
    pub fn track(&self, pieces: &[Piece], start: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut roots = start.to_vec();
        for (idx, piece) in pieces.iter().enumerate() {
            roots = self.track_piece(piece, roots).map_err(|e| match e {
                Error::Continuation(msg) => Error::Continuation(format!("piece {idx}: {msg}")),
                other => other,
            })?;
        }
        Ok(roots)
    }

    fn track_piece(&self, piece: &Piece, mut roots: Vec<Complex64>) -> Result<Vec<Complex64>> {
        let mut t = 0.0;
        let mut dt: f64 = 1.0 / 32.0;
        let min_dt = 1e-9;
        while t < 1.0 {
            let step = dt.min(1.0 - t);
            let (z0, z1) = (piece.at(t), piece.at(t + step));
            // Euler predictor along dw/dz = -F_z / F_w
            let predicted: Vec<Complex64> = roots
                .iter()
                .map(|&w| {
                    let (_, fz, fw) = self.eval(z0, w);
                    if fw.norm() > 0.0 {
                        w - fz / fw * (z1 - z0)
                    } else {
                        w
                    }
                })
                .collect();
            let fresh = self.roots(z1)?;
            if fresh.len() != roots.len() {
                return Err(Error::Continuation(format!("root count changed at z = {z1}")));
            }
            let sep = min_separation(&fresh);
            let (best, second) = best_two_assignments(&predicted, &fresh);
            let margin_ok = roots.len() < 2 || second >= 3.0 * best.cost;
            if best.max_dist < sep / 3.0 && margin_ok {
                roots = best.perm.iter().map(|&j| fresh[j]).collect();
                t += step;
                dt = (step * 1.5).min(0.125);
            } else {
                dt = step / 2.0;
                if dt < min_dt {
                    return Err(Error::Continuation(format!("step size underflow near z = {z0}")));
                }
            }
        }
        Ok(roots)
    }
}

pub(crate) fn horner(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

fn horner_d(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        dv = dv * x + v;
        v = v * x + c;
    }
    (v, dv)
}

pub(crate) fn min_separation(pts: &[Complex64]) -> f64 {
    let mut sep = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            sep = sep.min((pts[i] - pts[j]).norm());
        }
    }
    sep
}

/// A point of the `z`-line over which the cover is not a local
/// homeomorphism onto `d` finite sheets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialPoint {
    pub z: Complex64,
    /// Whether the leading coefficient vanishes here (sheets may escape to infinity).
    pub escape: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(text: &str, xi: f64) -> Curve {
        Curve::new(&BivarPolynomial::parse(text).unwrap(), Complex64::new(xi, 0.0)).unwrap()
    }

    #[test]
    fn circle_special_points() {
        let c = curve("z^2 + w^2", 1.0);
        let pts = c.special_points().unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0].z + 1.0).norm() < 1e-12 && (pts[1].z - 1.0).norm() < 1e-12);
        assert!(pts.iter().all(|p| !p.escape));
    }

    #[test]
    fn escape_points() {
        let c = curve("1 + z^2 + w^2 + z^2*w^2", 3.0);
        let pts = c.special_points().unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts.iter().filter(|p| p.escape).count(), 2);
    }

    #[test]
    fn loop_around_branch_point_swaps_sheets() {
        let c = curve("z^2 + w^2", 1.0);
        let b = Complex64::new(1.5, 0.0);
        let start = c.roots(b).unwrap();
        let end = c.track(&[Piece::circle_through(Complex64::new(1.0, 0.0), b)], &start).unwrap();
        assert!((end[0] - start[1]).norm() < 1e-10);
        assert!((end[1] - start[0]).norm() < 1e-10);
        let end = c.track(&[Piece::circle_through(Complex64::new(3.0, 0.0), b)], &start).unwrap();
        assert!((end[0] - start[0]).norm() < 1e-10);
    }

    #[test]
    fn degree_limits() {
        let f = BivarPolynomial::parse("z^2 + w").unwrap();
        assert!(matches!(Curve::new(&f, Complex64::new(0.0, 0.0)), Err(Error::Degree(1))));
        let f = BivarPolynomial::parse("z + w^7").unwrap();
        assert!(matches!(Curve::new(&f, Complex64::new(0.0, 0.0)), Err(Error::Degree(7))));
    }
}
