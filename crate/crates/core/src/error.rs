use thiserror::Error;

/// Everything that can go wrong inside the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LsdError {
    #[error("series has a zero constant term; logarithm undefined")]
    ZeroConstantTerm,

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("series order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("table of {requested} entries exceeds the memory budget of {limit}")]
    MemoryBudgetExceeded { requested: u64, limit: u64 },

    #[error("summation up to {requested} exceeds the time budget limit {limit}")]
    TimeBudgetExceeded { requested: u64, limit: u64 },

    #[error("table lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("table is not normalized: f(1) = {0}")]
    NotNormalized(String),

    #[error("local factor at p = {p} is out of range (|F_p(1)(1-1/p)^alpha - 1| = {distance})")]
    LocalFactorOutOfRange { p: u64, distance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("x = {x} is too small for the point form (need x > e)")]
    DomainTooSmall { x: f64 },

    #[error("quadrature did not converge (estimated error {error:e} after {intervals} intervals)")]
    QuadratureNonConvergence { error: f64, intervals: usize },

    #[error("degenerate fit (exact vanishing: {exact_vanishing})")]
    DegenerateFit { exact_vanishing: bool },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("declared alpha must be zero, got {0}")]
    AlphaNotZero(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl LsdError {
    /// True for the two budget variants; front-ends map these to a distinct exit status.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            LsdError::MemoryBudgetExceeded { .. } | LsdError::TimeBudgetExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, LsdError>;
