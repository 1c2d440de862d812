//! Rectangular parameter grids and the finite-difference stencils used for
//! closedness and Cauchy–Riemann residuals.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Axis-aligned grid of `nx * ny` nodes over `[x0, x1] x [y0, y1]`.
///
/// Node `(i, j)` sits at `x0 + i*hx + i*(y0 + j*hy)`; tabulated fields are
/// stored node-major with index `i * ny + j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::GridTooSmall { nx, ny });
        }
        if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidSample(format!("degenerate grid bounds [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Self { x0, x1, y0, y1, nx, ny })
    }

    /// A grid centred at `c` with spacing `h` in both directions and
    /// `2 * half + 1` nodes per side.
    pub fn centered(c: Complex64, h: f64, half: usize) -> Result<Self> {
        let r = h * half as f64;
        Self::new(c.re - r, c.re + r, c.im - r, c.im + r, 2 * half + 1, 2 * half + 1)
    }

    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y1 - self.y0) / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x0 + i as f64 * self.hx(), self.y0 + j as f64 * self.hy())
    }

    /// All nodes in storage order.
    pub fn nodes(&self) -> Vec<Complex64> {
        (0..self.nx).flat_map(|i| (0..self.ny).map(move |j| (i, j))).map(|(i, j)| self.node(i, j)).collect()
    }

    /// The grid with half the spacing over the same rectangle.
    pub fn refined(&self) -> Self {
        Self { nx: 2 * self.nx - 1, ny: 2 * self.ny - 1, ..*self }
    }

    pub fn is_refinement_of(&self, coarse: &Grid) -> bool {
        self.x0 == coarse.x0
            && self.x1 == coarse.x1
            && self.y0 == coarse.y0
            && self.y1 == coarse.y1
            && self.nx == 2 * coarse.nx - 1
            && self.ny == 2 * coarse.ny - 1
    }

    pub fn same_as(&self, o: &Grid) -> bool {
        self == o
    }

    /// Central-difference partials `(F_x, F_y)` at interior node `(i, j)`.
    pub fn partials(&self, field: &[Complex64], i: usize, j: usize) -> (Complex64, Complex64) {
        let fx = (field[self.index(i + 1, j)] - field[self.index(i - 1, j)]) / (2.0 * self.hx());
        let fy = (field[self.index(i, j + 1)] - field[self.index(i, j - 1)]) / (2.0 * self.hy());
        (fx, fy)
    }

    /// Central-difference gradient of a real field at interior node `(i, j)`.
    pub fn gradient(&self, field: &[f64], i: usize, j: usize) -> (f64, f64) {
        let gx = (field[self.index(i + 1, j)] - field[self.index(i - 1, j)]) / (2.0 * self.hx());
        let gy = (field[self.index(i, j + 1)] - field[self.index(i, j - 1)]) / (2.0 * self.hy());
        (gx, gy)
    }

    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.nx - 1).flat_map(move |i| (1..self.ny - 1).map(move |j| (i, j)))
    }
}

/// Which discrete residual to evaluate on a complex field `F = u + iv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residual {
    /// Curl of the real 1-form `Re(F dxi) = u dx - v dy`: `|u_y + v_x|`.
    Closedness,
    /// `|F_x + i F_y|`, twice the `d/d(conj xi)` derivative.
    CauchyRiemann,
}

impl Residual {
    pub fn at(self, grid: &Grid, field: &[Complex64], i: usize, j: usize) -> f64 {
        let (fx, fy) = grid.partials(field, i, j);
        match self {
            Residual::Closedness => (fy.re + fx.im).abs(),
            Residual::CauchyRiemann => (fx + Complex64::i() * fy).norm(),
        }
    }

    /// Maximum over interior nodes; boundary nodes are excluded.
    pub fn max(self, grid: &Grid, field: &[Complex64]) -> f64 {
        grid.interior().map(|(i, j)| self.at(grid, field, i, j)).fold(0.0, f64::max)
    }
}

/// Observed convergence order of a residual between a grid and its
/// refinement, comparing the stencils at the coarse interior nodes (which
/// are also fine nodes). `None` when the residuals are at round-off level.
pub fn refinement_order(
    kind: Residual,
    coarse: &Grid,
    coarse_field: &[Complex64],
    fine: &Grid,
    fine_field: &[Complex64],
) -> Result<Option<f64>> {
    if !fine.is_refinement_of(coarse) {
        return Err(Error::Mismatch("fine grid is not the refinement of the coarse grid".into()));
    }
    let mut rc: f64 = 0.0;
    let mut rf: f64 = 0.0;
    for (i, j) in coarse.interior() {
        rc = rc.max(kind.at(coarse, coarse_field, i, j));
        rf = rf.max(kind.at(fine, fine_field, 2 * i, 2 * j));
    }
    Ok(order_from(rc, rf))
}

/// Residuals at or below this are round-off and carry no convergence order.
const ROUNDOFF_FLOOR: f64 = 1e-11;

pub(crate) fn order_from(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > ROUNDOFF_FLOOR && fine > 0.0).then(|| libm::log2(coarse / fine))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(grid: &Grid, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        grid.nodes().into_iter().map(f).collect()
    }

    #[test]
    fn constant_field_has_zero_residuals() {
        let g = Grid::new(0.0, 1.0, 0.0, 1.0, 5, 5).unwrap();
        let f = sample(&g, |_| Complex64::new(2.0, -1.0));
        assert_eq!(Residual::Closedness.max(&g, &f), 0.0);
        assert_eq!(Residual::CauchyRiemann.max(&g, &f), 0.0);
    }

    #[test]
    fn conjugate_is_closed_but_not_holomorphic() {
        let g = Grid::new(-1.0, 1.0, -1.0, 1.0, 9, 9).unwrap();
        let f = sample(&g, |z| z.conj());
        assert!(Residual::Closedness.max(&g, &f) < 1e-14);
        assert!((Residual::CauchyRiemann.max(&g, &f) - 2.0).abs() < 1e-12);
        // i*conj(xi): Re(F dxi) = y dx - x dy has curl -2
        let f = sample(&g, |z| Complex64::i() * z.conj());
        assert!((Residual::Closedness.max(&g, &f) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn second_order_for_exp() {
        let g = Grid::new(0.0, 0.4, 0.0, 0.4, 9, 9).unwrap();
        let fine = g.refined();
        let c = sample(&g, |z| z.exp());
        let f = sample(&fine, |z| z.exp());
        let o = refinement_order(Residual::CauchyRiemann, &g, &c, &fine, &f).unwrap().unwrap();
        assert!((o - 2.0).abs() < 0.1, "order {o}");
    }

    #[test]
    fn rejects_small_grids() {
        assert!(matches!(Grid::new(0.0, 1.0, 0.0, 1.0, 2, 5), Err(Error::GridTooSmall { .. })));
    }
}
