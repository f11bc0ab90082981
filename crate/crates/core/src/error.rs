use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {dim} exceeds the configured bound {max}")]
    DimensionBound { dim: usize, max: usize },
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error("not a projector: {0}")]
    NotProjector(String),
    #[error("not unitary: {0}")]
    NotUnitary(String),
    #[error("ket is not unit norm (norm squared {norm_sqr})")]
    NotUnitKet { norm_sqr: f64 },
    #[error("generators {first} and {second} do not commute")]
    NonCommuting { first: usize, second: usize },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("context {below} is not below context {above}")]
    NotBelow { below: String, above: String },
    #[error("subobjects live on different presheaves")]
    PresheafMismatch,
    #[error("values live on different posets")]
    PosetMismatch,
    #[error("not restriction-closed at stage {stage}")]
    NotRestrictionClosed { stage: usize },
    #[error("search exceeded the cap of {cap} candidates; use a smaller poset or raise the cap")]
    CapExceeded { cap: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("histories are not disjoint: {0}")]
    NotDisjoint(String),
    #[error("invalid history: {0}")]
    InvalidHistory(String),
    #[error("invalid density matrix: {0}")]
    NotDensity(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
