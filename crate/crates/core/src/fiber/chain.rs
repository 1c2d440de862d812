use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::overlap::{simple_ccw, verify_certificate, ExtensionCertificate, OrientedPolygon, QPoint};
use crate::word::{glue, matrices, GluedSurface, QuadraticWord};
use crate::{Error, Result};

/// The closed `2n`-gonal line of a word at side vectors `z` and offset `j0`.
///
/// Side `l` (1-based) runs from vertex `P_l` to `P_{l+1}`, `P_{2n+1} = P_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonChain {
    pub vertices: Vec<Complex64>,
    pub z: Vec<Complex64>,
    pub j0: Complex64,
    edges: Vec<Complex64>,
}

impl PolygonChain {
    pub fn new(word: &QuadraticWord, z: &[Complex64], j0: Complex64) -> Result<Self> {
        let n = word.n();
        if z.len() != n {
            return Err(Error::SideCount { expected: n, got: z.len() });
        }
        if let Some(k) = z.iter().position(|v| *v == Complex64::new(0.0, 0.0)) {
            return Err(Error::ZeroSide(k + 1));
        }
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) || !j0.re.is_finite() || !j0.im.is_finite() {
            return Err(Error::InvalidSample("non-finite side vector".into()));
        }
        let data = matrices(word);
        let vertices = (1..=2 * n).map(|l| data.apply_a(l, z) + j0).collect();
        // edges straight from the letters, so paired sides are exact negatives
        let edges = (1..=2 * n)
            .map(|l| {
                let letter = word.letter_at(l);
                z[letter.index - 1] * letter.sign as f64
            })
            .collect();
        Ok(Self { vertices, z: z.to_vec(), j0, edges })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex `P_l`, 1-based and cyclic.
    pub fn vertex(&self, l: usize) -> Complex64 {
        self.vertices[(l - 1) % self.len()]
    }

    /// Edge vector of side `l`: `+z_k` for `a_k`, `-z_k` for `a_k^-1`.
    pub fn edge(&self, l: usize) -> Complex64 {
        self.edges[(l - 1) % self.len()]
    }

    /// Sum of the edge vectors, added pairwise by letter.
    pub fn closure(&self, word: &QuadraticWord) -> Complex64 {
        (1..=word.n())
            .map(|k| self.edge(word.pos_plus(k)) + self.edge(word.pos_minus(k)))
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    }

    /// Interior angle at `P_l` on the left of the traversal, in `(0, 2pi)`.
    pub fn corner_angle(&self, l: usize) -> f64 {
        let m = self.len();
        let u = self.edge((l + m - 2) % m + 1);
        let v = self.edge(l);
        PI - libm::atan2(u.re * v.im - u.im * v.re, u.re * v.re + u.im * v.im)
    }

    fn exact_points(&self) -> Result<Vec<QPoint>> {
        self.vertices
            .iter()
            .map(|p| QPoint::from_f64_exact(p.re, p.im).ok_or_else(|| Error::InvalidSample("non-finite vertex".into())))
            .collect()
    }

    /// Whether the chain bounds an embedded, positively oriented polygon,
    /// decided exactly on the stored vertex coordinates.
    pub fn is_embedded(&self) -> bool {
        self.exact_points().map(|p| simple_ccw(&p)).unwrap_or(false)
    }

    /// The chain as an exact polygon, for extension searches.
    pub fn polygon(&self) -> Result<OrientedPolygon> {
        OrientedPolygon::new(self.exact_points()?)
    }
}

/// The translation gluing letter `k`'s side onto its partner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SidePairing {
    pub letter: usize,
    /// Side carrying `a_k` (edge vector `+z_k`).
    pub side: usize,
    /// Side carrying `a_k^-1` (edge vector `-z_k`).
    pub hat_side: usize,
    /// `T_k(z)`: moves the start of `side` to the end of `hat_side`.
    pub translation: Complex64,
}

/// A fiber as a flat surface: the polygon, its side pairings and the cone
/// angles at the vertex classes.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationFiber {
    pub chain: PolygonChain,
    pub pairing: Vec<SidePairing>,
    pub surface: GluedSurface,
    /// Total angle at each corner; exceeds the interior angle at branched corners.
    pub corner_angles: Vec<f64>,
    /// Total angle per vertex class.
    pub cone_angles: Vec<f64>,
}

impl TranslationFiber {
    /// Cone angles as multiples of `2pi`, with the largest deviation from
    /// an integer.
    pub fn cone_orders(&self) -> (Vec<i64>, f64) {
        let mut dev: f64 = 0.0;
        let orders = self
            .cone_angles
            .iter()
            .map(|a| {
                let q = a / (2.0 * PI);
                let r = libm::round(q);
                dev = dev.max((q - r).abs() * 2.0 * PI);
                r as i64
            })
            .collect();
        (orders, dev)
    }

    pub fn total_angle(&self) -> f64 {
        self.cone_angles.iter().sum()
    }
}

/// Builds the fiber of an embedded chain.
pub fn build_fiber(word: &QuadraticWord, z: &[Complex64], j0: Complex64) -> Result<TranslationFiber> {
    let chain = PolygonChain::new(word, z, j0)?;
    if !chain.is_embedded() {
        return Err(Error::NeedsExtension);
    }
    let corners = (1..=chain.len()).map(|l| chain.corner_angle(l)).collect();
    Ok(assemble(word, chain, corners))
}

/// Builds the fiber of a chain bounding the immersed (possibly branched)
/// disk described by `cert`; corner angles are taken from the certificate.
pub fn build_fiber_with(
    word: &QuadraticWord,
    z: &[Complex64],
    j0: Complex64,
    cert: &ExtensionCertificate,
) -> Result<TranslationFiber> {
    let chain = PolygonChain::new(word, z, j0)?;
    let poly = chain.polygon()?;
    if !verify_certificate(&poly, cert) {
        return Err(Error::Mismatch(format!("certificate does not describe an extension of this {}-gon", chain.len())));
    }
    let corners = (0..chain.len())
        .map(|v| chain.corner_angle(v + 1) + 2.0 * PI * (cert.corner_multiplicity[v] - 1) as f64)
        .collect();
    Ok(assemble(word, chain, corners))
}

fn assemble(word: &QuadraticWord, chain: PolygonChain, corner_angles: Vec<f64>) -> TranslationFiber {
    let surface = glue(word);
    let data = matrices(word);
    let pairing = (1..=word.n())
        .map(|k| SidePairing {
            letter: k,
            side: word.pos_plus(k),
            hat_side: word.pos_minus(k),
            translation: data.apply_t(k, &chain.z),
        })
        .collect();
    let mut cone_angles = vec![0.0; surface.s];
    for (v, &a) in corner_angles.iter().enumerate() {
        cone_angles[surface.vertex_class[v]] += a;
    }
    TranslationFiber { chain, pairing, surface, corner_angles, cone_angles }
}
