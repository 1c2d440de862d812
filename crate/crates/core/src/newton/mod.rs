//! Newton polygons of bivariate polynomials and the fiber invariants they
//! predict: genus from interior lattice points, punctures from boundary
//! points off the axes, cone angles from triangle areas.

mod analysis;
mod lattice;
mod poly;

pub use analysis::{
    fiber_prediction, hypothesis_check, predict, weak_nondegeneracy, DegenerateEdge, FiberPrediction, HypothesisCheck,
    Nondegeneracy, PuncturePair,
};
pub use lattice::{newton_polygon, LatticeEdge, LatticePoint, LatticePolygon};
pub use poly::BivarPolynomial;
