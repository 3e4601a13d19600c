use thiserror::Error;

#[derive(Debug, Error)]
pub enum TomoError {
    #[error("body spec field `{field}`: {reason}")]
    BadBodySpec { field: String, reason: String },

    #[error("unbounded body")]
    UnboundedBody,

    #[error("empty or lower-dimensional body")]
    DegenerateBody,

    #[error("origin outside interior")]
    OriginOutsideInterior,

    #[error("degenerate width")]
    DegenerateWidth,

    #[error("direction must be a unit vector of dimension >= 2")]
    BadDirection,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadrature did not converge (achieved estimate {estimate}, error {error})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("ill-conditioned normal system (condition {cond:.3e}): increase samples or reduce degree")]
    IllConditionedFit { cond: f64 },

    #[error("not enough samples: need at least {needed}, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },

    #[error("sample abscissae must be distinct")]
    DuplicateSamples,

    #[error("degenerate leading coefficient")]
    DegenerateLeadingCoefficient,

    #[error("no unique normal")]
    NoUniqueNormal,

    #[error("offset exceeds inradius")]
    OffsetExceedsInradius,

    #[error("derivative order {order} too large for stable differentiation (max 12)")]
    DerivativeOrderTooLarge { order: usize },

    #[error("shrink window: section samples near tangency are nonpositive")]
    ShrinkWindow,

    #[error("rank-deficient design matrix: enlarge direction grid")]
    RankDeficientGrid,

    #[error("operation not supported for this body representation: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, TomoError>;
