//! Exact and floating-point polynomial algebra shared by the Newton and
//! numerics modules.

mod assign;
mod gauss;
mod resultant;
mod roots;
mod upoly;

pub use assign::{best_two_assignments, Assignment};
pub use gauss::{rational_from_f64, GaussianRational};
pub use resultant::{resultant_in_w, ZwPoly};
pub use roots::{eval_complex, polish_root, roots as poly_roots};
pub use upoly::QPoly;
