use alloc::string::String;

/// Errors raised by the core pipeline.
///
/// Variants split into input validation problems and numerical failures;
/// [`Error::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("word syntax error at byte {pos}: {msg}")]
    WordSyntax { pos: usize, msg: String },
    #[error("invalid quadratic word: {0}")]
    InvalidWord(String),
    #[error("polynomial syntax error at byte {pos}: {msg}")]
    PolySyntax { pos: usize, msg: String },
    #[error("constant polynomial has no Newton polygon analysis")]
    ConstantPolynomial,
    #[error("polynomial outside the admissible class: {0}")]
    NotAdmissible(String),
    #[error("side vector z_{0} is zero")]
    ZeroSide(usize),
    #[error("expected {expected} side vectors, got {got}")]
    SideCount { expected: usize, got: usize },
    #[error("polygonal line is not embedded; an extension certificate is required")]
    NeedsExtension,
    #[error("polygonal line admits no immersed-disk extension")]
    NotExtendable,
    #[error("polygon is not generic: {0}")]
    Genericity(String),
    #[error("polygon has {got} corners, enumeration limit is {limit}")]
    SizeLimit { got: usize, limit: usize },
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("grid too small: need at least 3x3 nodes, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("exactness check failed: residual {residual:e} exceeds tolerance {tol:e}")]
    NotExact { residual: f64, tol: f64 },
    #[error("word is not normalized (spanning-tree condition fails)")]
    NotNormalized,
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("critical locus is not isolated")]
    NonIsolated,
    #[error("fiber value is critical or too close to a critical value: {0}")]
    CriticalValue(String),
    #[error("projection degree {0} is outside the supported range")]
    Degree(usize),
    #[error("root continuation failed: {0}")]
    Continuation(String),
    #[error("inconsistent monodromy: {0}")]
    Monodromy(String),
    #[error("integration contour collides with a branch point: {0}")]
    Collision(String),
    #[error("root finding did not converge")]
    RootFinding,
}

impl Error {
    /// True for failures of numerical procedures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Continuation(_)
                | Error::Monodromy(_)
                | Error::Collision(_)
                | Error::RootFinding
                | Error::NotExact { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
