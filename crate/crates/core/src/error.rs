use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(usize, usize),

    #[error("point {id} has {found} coordinates, expected {expected}")]
    DimensionMismatch { id: usize, expected: usize, found: usize },

    #[error("map is not injective: {first} and {second} both map to {target}")]
    NonInjective { first: usize, second: usize, target: usize },

    #[error("map collapses distinct points {0} and {1} to distance zero")]
    Collapsed(usize, usize),

    #[error("map is undefined on point {0}")]
    NotTotal(usize),

    #[error("map sends {source_id} to {target}, outside the target's {len} points")]
    OutOfRange { source_id: usize, target: usize, len: usize },

    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),

    #[error("construction would have {requested} vertices, above the cap of {cap}")]
    SizeCap { requested: u128, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} has degree {degree}, but the gadget tree has only {leaves} leaves")]
    DegreeOverflow { vertex: usize, degree: usize, leaves: usize },

    #[error("graph must have unit edge length 1, found {0}")]
    NotUnitLength(String),

    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular { vertex: usize, degree: usize, expected: usize },

    #[error("vertex {vertex} has degree {degree}, above the allowed {max}")]
    DegreeTooLarge { vertex: usize, degree: usize, max: usize },

    #[error(
        "found only {achieved} of {needed} vertices at pairwise distance >= {separation} in a base graph on {base_n} vertices; use a larger base"
    )]
    SeparatedSetNotFound { achieved: usize, needed: usize, separation: u32, base_n: usize },

    #[error("no simple regular graph after {0} pairing attempts; try a different seed")]
    RejectionBudget(usize),

    #[error("embedding has no coordinates for vertex {0}")]
    MissingCoordinates(usize),

    #[error("embedding is not normalized: upper Lipschitz constant is {0}, expected at most 1")]
    NotNormalized(String),

    #[error("l2 rescaling needs the square root of {0}, which is irrational")]
    IrrationalScale(String),

    #[error("{field}: {message}")]
    Schema { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { field: field.into(), message: message.into() }
    }
}
