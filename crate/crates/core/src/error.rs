use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("relator `{0}` reduces to the empty word")]
    TrivialRelator(String),
    #[error("presentation has no relators")]
    NoRelators,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown model spec `{0}` (expected z, zd:D, heisenberg:xy|xyz, lamplighter2, zwrz, lamplighter2_z2, free:K)")]
    UnknownSpec(String),
    #[error("invalid parameter in `{spec}`: {reason}")]
    InvalidParameter { spec: String, reason: String },
    #[error("letter `{0}` has no generator in the model")]
    UnmappedLetter(String),
    #[error("malformed canonical key for model `{0}`")]
    MalformedKey(String),
}

/// Errors from ball construction and every analysis over a ball.
#[derive(Error, Debug)]
pub enum AnalysisError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("vertex budget of {cap} exceeded while building radius {radius}; last completed radius {last_complete}")]
    BudgetExceeded { cap: usize, radius: u32, last_complete: u32 },
    #[error("element is not in the ball of radius {radius}")]
    NotInBall { radius: u32 },
    #[error("radius {n} out of range 0..={max}")]
    OutOfRange { n: u32, max: u32 },
    #[error("horizon guard violated: {what} = {value} but at most {limit} is allowed for N = {radius} with guard {guard}")]
    GuardViolated {
        what: &'static str,
        value: u32,
        limit: u32,
        radius: u32,
        guard: u32,
    },
    #[error("no horizon component in the complement of B_{n} within B_{radius}")]
    NoHorizonComponent { n: u32, radius: u32 },
    #[error("region is empty")]
    EmptyRegion,
    #[error("region is not simply connected (region components: {region_components}, complement components: {complement_components})")]
    NotSimplyConnected {
        region_components: usize,
        complement_components: usize,
    },
    #[error("relator `{relator}` does not hold in model `{model}`")]
    RelatorDoesNotHold { relator: String, model: String },
    #[error("model `{0}` is not known to be one-ended")]
    NotOneEnded(String),
    #[error("relator loop leaves the ball of radius {radius}")]
    LoopExitsBall { radius: u32 },
    #[error("annulus has {size} vertices, above the export limit of {limit}")]
    AnnulusTooLarge { size: usize, limit: usize },
    #[error("cache file: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = AnalysisError> = std::result::Result<T, E>;
