use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::{order_from, Grid, Residual};
use crate::word::{glue, matrices, QuadraticWord};
use crate::{Error, Result};

use super::PolygonChain;

/// Tabulated `J: U -> (C*)^n` and `J0: U -> C` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricSample {
    pub grid: Grid,
    /// `j[node]` holds `(J_1, ..., J_n)` at that node (storage order of the grid).
    pub j: Vec<Vec<Complex64>>,
    pub j0: Vec<Complex64>,
}

impl GeometricSample {
    pub fn new(grid: Grid, j: Vec<Vec<Complex64>>, j0: Vec<Complex64>) -> Result<Self> {
        if j.len() != grid.len() || j0.len() != grid.len() {
            return Err(Error::InvalidSample(format!(
                "expected {} nodes, got {} J rows and {} J0 values",
                grid.len(),
                j.len(),
                j0.len()
            )));
        }
        let n = j.first().map_or(0, Vec::len);
        if n == 0 || j.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSample("J rows must share one positive length".into()));
        }
        for (node, row) in j.iter().enumerate() {
            if let Some(k) = row.iter().position(|v| v.norm_sqr() == 0.0) {
                return Err(Error::InvalidSample(format!("J_{} vanishes at node {node}", k + 1)));
            }
            if row.iter().chain([&j0[node]]).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::InvalidSample(format!("non-finite value at node {node}")));
            }
        }
        Ok(Self { grid, j, j0 })
    }

    /// Tabulates closed-form `J` and `J0`.
    pub fn from_fn(
        grid: Grid,
        j: impl Fn(Complex64) -> Vec<Complex64>,
        j0: impl Fn(Complex64) -> Complex64,
    ) -> Result<Self> {
        let nodes = grid.nodes();
        Self::new(grid, nodes.iter().map(|&x| j(x)).collect(), nodes.iter().map(|&x| j0(x)).collect())
    }

    pub fn n(&self) -> usize {
        self.j[0].len()
    }

    /// The polygon line at node `(i, j)`.
    pub fn chain(&self, word: &QuadraticWord, i: usize, j: usize) -> Result<PolygonChain> {
        let node = self.grid.index(i, j);
        PolygonChain::new(word, &self.j[node], self.j0[node])
    }

    fn check_word(&self, word: &QuadraticWord) -> Result<()> {
        if word.n() != self.n() {
            return Err(Error::SideCount { expected: word.n(), got: self.n() });
        }
        Ok(())
    }

    /// `T_k(J(xi))` over the grid.
    fn translation_field(&self, word: &QuadraticWord, k: usize) -> Vec<Complex64> {
        let data = matrices(word);
        self.j.iter().map(|row| data.apply_t(k, row)).collect()
    }
}

/// Closedness of the forms `Re(T_k(J) dxi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessReport {
    /// Largest discrete curl per letter.
    pub residuals: Vec<f64>,
    /// Largest `|HV - VH| / 2pi` between the two axis-aligned paths from
    /// the lower-left node, per letter.
    pub path_residuals: Vec<f64>,
    /// Observed order of the curl between `h` and `h/2`, when a refined
    /// sample was supplied and both residuals are nonzero.
    pub order: Option<f64>,
    pub tol: f64,
    pub passes: bool,
}

impl ExactnessReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn require_normalized(word: &QuadraticWord) -> Result<()> {
    if glue(word).tree_ok {
        Ok(())
    } else {
        Err(Error::NotNormalized)
    }
}

/// Central-difference curl of each `Re(T_k(J) dxi)` at the interior nodes.
pub fn check_exactness(word: &QuadraticWord, sample: &GeometricSample, tol: f64) -> Result<ExactnessReport> {
    require_normalized(word)?;
    sample.check_word(word)?;
    let grid = &sample.grid;
    let mut residuals = Vec::with_capacity(word.n());
    let mut path_residuals = Vec::with_capacity(word.n());
    for k in 1..=word.n() {
        let field = sample.translation_field(word, k);
        residuals.push(Residual::Closedness.max(grid, &field));
        let paths = PathIntegrals::new(grid, &field, (0, 0));
        path_residuals.push(paths.max_disagreement() / (2.0 * PI));
    }
    let passes = residuals.iter().all(|&r| r <= tol);
    Ok(ExactnessReport { residuals, path_residuals, order: None, tol, passes })
}

/// As [`check_exactness`] on `coarse`, with the convergence order measured
/// against `fine`, a sample of the same maps on the refined grid.
pub fn check_exactness_refined(
    word: &QuadraticWord,
    coarse: &GeometricSample,
    fine: &GeometricSample,
    tol: f64,
) -> Result<ExactnessReport> {
    let mut report = check_exactness(word, coarse, tol)?;
    fine.check_word(word)?;
    if !fine.grid.is_refinement_of(&coarse.grid) {
        return Err(Error::Mismatch("fine sample is not on the refined grid".into()));
    }
    let (mut rc, mut rf): (f64, f64) = (0.0, 0.0);
    for k in 1..=word.n() {
        let cf = coarse.translation_field(word, k);
        let ff = fine.translation_field(word, k);
        for (i, j) in coarse.grid.interior() {
            rc = rc.max(Residual::Closedness.at(&coarse.grid, &cf, i, j));
            rf = rf.max(Residual::Closedness.at(&fine.grid, &ff, 2 * i, 2 * j));
        }
    }
    report.order = order_from(rc, rf);
    Ok(report)
}

/// Trapezoid integrals of `Re(F dxi) = u dx - v dy` along grid lines.
struct PathIntegrals<'a> {
    grid: &'a Grid,
    base: (usize, usize),
    // rows[j][i]: integral along row j from column 0 to column i
    rows: Vec<Vec<f64>>,
    // cols[i][j]: integral along column i from row 0 to row j
    cols: Vec<Vec<f64>>,
}

impl<'a> PathIntegrals<'a> {
    fn new(grid: &'a Grid, field: &[Complex64], base: (usize, usize)) -> Self {
        let (hx, hy) = (grid.hx(), grid.hy());
        let at = |i, j| field[grid.index(i, j)];
        let rows = (0..grid.ny)
            .map(|j| {
                let mut acc = vec![0.0; grid.nx];
                for i in 1..grid.nx {
                    acc[i] = acc[i - 1] + 0.5 * hx * (at(i - 1, j).re + at(i, j).re);
                }
                acc
            })
            .collect();
        let cols = (0..grid.nx)
            .map(|i| {
                let mut acc = vec![0.0; grid.ny];
                for j in 1..grid.ny {
                    acc[j] = acc[j - 1] - 0.5 * hy * (at(i, j - 1).im + at(i, j).im);
                }
                acc
            })
            .collect();
        Self { grid, base, rows, cols }
    }

    /// Horizontal first, then vertical.
    fn hv(&self, i: usize, j: usize) -> f64 {
        let (bi, bj) = self.base;
        (self.rows[bj][i] - self.rows[bj][bi]) + (self.cols[i][j] - self.cols[i][bj])
    }

    /// Vertical first, then horizontal.
    fn vh(&self, i: usize, j: usize) -> f64 {
        let (bi, bj) = self.base;
        (self.cols[bi][j] - self.cols[bi][bj]) + (self.rows[j][i] - self.rows[j][bi])
    }

    fn max_disagreement(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.grid.nx {
            for j in 0..self.grid.ny {
                worst = worst.max((self.hv(i, j) - self.vh(i, j)).abs());
            }
        }
        worst
    }
}

/// The action coordinates `I_1, ..., I_2g` with `2pi dI_k = Re(T_k(J) dxi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionIntegrals {
    pub grid: Grid,
    pub base: (usize, usize),
    /// `values[k - 1][node]`.
    pub values: Vec<Vec<f64>>,
    /// Largest `|HV - VH| / 2pi` per `k`.
    pub path_residuals: Vec<f64>,
}

/// Integrates `Re(T_k(J) dxi) / 2pi` from `base` along the horizontal-then-
/// vertical grid path, for `k <= 2g`.
pub fn action_integrals(
    word: &QuadraticWord,
    sample: &GeometricSample,
    base: (usize, usize),
    tol: f64,
) -> Result<ActionIntegrals> {
    let grid = sample.grid;
    if base.0 >= grid.nx || base.1 >= grid.ny {
        return Err(Error::InvalidSample(format!("basepoint {base:?} is off the grid")));
    }
    let report = check_exactness(word, sample, tol)?;
    if !report.passes {
        return Err(Error::NotExact { residual: report.max_residual(), tol });
    }
    let g = glue(word).g;
    let mut values = Vec::with_capacity(2 * g);
    let mut path_residuals = Vec::with_capacity(2 * g);
    for k in 1..=2 * g {
        let field = sample.translation_field(word, k);
        let paths = PathIntegrals::new(&grid, &field, base);
        let mut vals = vec![0.0; grid.len()];
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                vals[grid.index(i, j)] = paths.hv(i, j) / (2.0 * PI);
            }
        }
        values.push(vals);
        path_residuals.push(paths.max_disagreement() / (2.0 * PI));
    }
    Ok(ActionIntegrals { grid, base, values, path_residuals })
}

/// One side of an equivalence test.
#[derive(Clone, Copy, Debug)]
pub struct FiberData<'a> {
    pub word: &'a QuadraticWord,
    pub sample: &'a GeometricSample,
    pub integrals: &'a ActionIntegrals,
}

/// Outcome of [`data_equivalent`].
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Largest `|dI - dI*|` over interior nodes (finite-difference gradients).
    pub action_residual: f64,
    /// Largest `|K - K*|` with `K = (J_{2g+1}, ..., J_n)`.
    pub k_residual: f64,
    /// Largest discrete curl of `Re((J0 - J0*) dxi)`.
    pub offset_curl: f64,
}

/// Compares the data `(dI, K, J0)` of two fibrations over the same grid.
pub fn data_equivalent(d1: FiberData<'_>, d2: FiberData<'_>, tol: f64) -> Result<EquivalenceReport> {
    if d1.word.letters() != d2.word.letters() {
        return Err(Error::Mismatch("the words differ".into()));
    }
    let grid = d1.sample.grid;
    if !grid.same_as(&d2.sample.grid) || !grid.same_as(&d1.integrals.grid) || !grid.same_as(&d2.integrals.grid) {
        return Err(Error::Mismatch("the grids differ".into()));
    }
    d1.sample.check_word(d1.word)?;
    d2.sample.check_word(d2.word)?;
    if d1.integrals.values.len() != d2.integrals.values.len() {
        return Err(Error::Mismatch("action data of different lengths".into()));
    }
    let g = glue(d1.word).g;
    let mut action_residual: f64 = 0.0;
    for (a, b) in d1.integrals.values.iter().zip(&d2.integrals.values) {
        for (i, j) in grid.interior() {
            let (ax, ay) = grid.gradient(a, i, j);
            let (bx, by) = grid.gradient(b, i, j);
            action_residual = action_residual.max(libm::hypot(ax - bx, ay - by));
        }
    }
    let mut k_residual: f64 = 0.0;
    for (r1, r2) in d1.sample.j.iter().zip(&d2.sample.j) {
        for k in 2 * g..r1.len() {
            k_residual = k_residual.max((r1[k] - r2[k]).norm());
        }
    }
    let diff: Vec<Complex64> = d1.sample.j0.iter().zip(&d2.sample.j0).map(|(a, b)| a - b).collect();
    let offset_curl = Residual::Closedness.max(&grid, &diff);
    Ok(EquivalenceReport {
        equivalent: action_residual <= tol && k_residual <= tol && offset_curl <= tol,
        action_residual,
        k_residual,
        offset_curl,
    })
}
