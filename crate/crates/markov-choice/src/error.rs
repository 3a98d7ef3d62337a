use thiserror::Error;

/// Unified error type for the crate.
///
/// Content problems in data (probabilities not summing to one, assumption
/// violations, …) are *reported* by the validation operations rather than
/// raised; `Error` is reserved for structural misuse: unknown names, shape
/// mismatches, missing entries, unsolvable systems, bad files.
#[derive(Debug, Error)]
pub enum Error {
    #[error("universe needs at least two alternatives, got {0}")]
    UniverseTooSmall(usize),

    #[error("alternative names must be non-empty")]
    EmptyAlternativeName,

    #[error("duplicate alternative `{0}` in universe")]
    DuplicateAlternative(String),

    #[error("unknown alternative `{0}`")]
    UnknownAlternative(String),

    #[error("alternative index {index} out of range for universe of size {size}")]
    AltOutOfRange { index: usize, size: usize },

    #[error("menus must be non-empty")]
    EmptyMenu,

    #[error("expected a binary menu of two distinct alternatives")]
    NotBinary,

    #[error("menu {0} is not stored")]
    MenuNotStored(String),

    #[error("{what}: expected {expected} entries, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("alternative {0} is not a member of the menu")]
    NotInMenu(usize),

    #[error("tolerances invalid: {0}")]
    BadTolerances(String),

    #[error("stopping probability must lie in (0,1), got {0}")]
    InvalidAlpha(f64),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("linear system is singular or ill-conditioned: {0}")]
    SingularSystem(String),

    #[error("sub-chain is not closed: row {row} keeps only {sum} mass")]
    NotClosed { row: usize, sum: f64 },

    #[error("chain is not irreducible: {classes} communicating classes")]
    NotIrreducible { classes: usize },

    #[error("{what} supports up to {cap} alternatives, menu has {size}")]
    CapacityExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("dataset is invalid: {0}")]
    InvalidDataset(String),

    #[error("model construction failed: {0}")]
    ConstructionFailed(String),

    #[error("restriction rejected: {0}")]
    RestrictionRejected(String),

    #[error("not a decoy configuration: {0}")]
    DecoyPattern(String),

    #[error("cannot parse `{text}` as a decimal number")]
    ParseDecimal { text: String },

    #[error("{path}: {detail}")]
    FileFormat { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
