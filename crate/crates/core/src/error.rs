use thiserror::Error;

/// Error taxonomy shared across the workspace.
///
/// The CLI maps these onto exit codes: verification failures -> 1,
/// resource/precision caps -> 2, bad input -> 3.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("patch conflict at {at:?}: {left} vs {right}")]
    Conflict { at: Vec<i64>, left: String, right: String },

    #[error("unknown symbol {0:?} for this oracle")]
    UnknownSymbol(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("precision cap exceeded at {bits} fractional bits: {context}")]
    PrecisionCap { bits: u32, context: String },

    #[error("shifted cylinders are not pairwise disjoint: {0}")]
    Overlap(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a three-cycle: {0}")]
    NotAThreeCycle(String),

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("no grid embedding found: {0}")]
    GridObstruction(String),

    #[error("window does not determine a piece")]
    NeedLargerWindow,

    #[error("window is not admissible")]
    InadmissibleWindow,

    #[error("point lies on an untagged boundary line: {0}")]
    MissingTag(String),

    #[error("value is not in P: {0}")]
    NotInP(String),

    #[error("patch occurs in no tiling: {0}")]
    EmptyPatch(String),

    #[error("no piece contains the point: {0}")]
    NoPiece(String),

    #[error("internal verification failed: {0}")]
    VerificationFailed(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
