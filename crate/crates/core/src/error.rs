use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("output length must be positive")]
    EmptyOutput,

    #[error("breakpoints must be sorted and inside [-pi, pi]")]
    UnsortedBreakpoints,

    #[error("panel count must be at least 1")]
    NoPanels,

    #[error("grid size {0} must be even and at least {min}", min = crate::discretize::MIN_GRID_POINTS)]
    InvalidGrid(usize),

    #[error("requested {requested} values but the operator has dimension {available}")]
    TopKTooLarge { requested: usize, available: usize },

    #[error("operator is not Hermitian (relative defect {0:e})")]
    NotHermitian(f64),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("requested {requested} eigenvalues but only {resolvable} are resolved at this grid")]
    Unresolved { requested: usize, resolvable: usize },

    #[error("transform window too small: tail bound {bound:e} exceeds budget {budget:e}")]
    WindowTooSmall { bound: f64, budget: f64 },

    #[error("grid sizes must be strictly increasing")]
    GridsNotIncreasing,

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("cannot parse sequence literal `{literal}`: {reason}")]
    SequenceLiteral { literal: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
