//! Immersed-disk extensions of closed polygonal lines.
//!
//! A positively oriented closed polygon bounds an immersed disk (with no
//! branching at the corners) exactly when its turning number is 1 and its
//! abstract disk admits a triangulation by corner-to-corner chords in which
//! every triangle is positively oriented. Each such triangulation develops
//! into an immersion, and every immersion pulls back a flat disk that can be
//! triangulated this way. Two triangulations describe the same extension
//! (up to homeomorphisms of the disk fixing the boundary) exactly when the
//! flat disks they build have the same set of corner-to-corner geodesic
//! chords; that set is the canonical key used for enumeration.

mod arrangement;
mod exact;
mod extension;
mod polygon;

pub use arrangement::{winding_faces, Arrangement, Face};
pub(crate) use exact::simple_ccw;
pub use exact::{parse_rational, QPoint};
pub use extension::{
    enumerate_branched_extensions, enumerate_extensions, is_self_overlapping, verify_certificate, ExtensionCertificate,
    OverlapDecision, MAX_ENUMERATION_CORNERS,
};
pub use polygon::OrientedPolygon;
