//! Polygon families attached to a word, the translation surfaces they
//! glue into, and the closedness checks on tabulated parameter samples.

mod chain;
mod exactness;

pub use chain::{build_fiber, build_fiber_with, PolygonChain, SidePairing, TranslationFiber};
pub use exactness::{
    action_integrals, check_exactness, check_exactness_refined, data_equivalent, ActionIntegrals, EquivalenceReport,
    ExactnessReport, FiberData, GeometricSample,
};
