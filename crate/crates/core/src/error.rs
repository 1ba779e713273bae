use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series must have at least one coefficient")]
    EmptySeries,
    #[error("leading coefficient a1 is zero; the series cannot be inverted")]
    ZeroLeadingCoefficient,
    #[error("derivative order {0} is not supported (expected 1 or 2)")]
    UnsupportedOrder(u32),
    #[error("root test needs {needed} usable coefficients, found {found}")]
    InsufficientTerms { needed: usize, found: usize },
    #[error("requested {requested} terms but only {available} are available")]
    TruncationTooLong { requested: usize, available: usize },
    #[error("invalid term count {0}")]
    InvalidTermCount(usize),
    #[error("radicand for C is not positive ({0}); too few terms?")]
    NegativeRadicand(String),
    #[error("{0}")]
    Domain(String),
    #[error("psi = {psi} needs eta >= {floor}, got {eta}")]
    OriginSingularity { eta: f64, psi: f64, floor: f64 },
    #[error("threshold {threshold} not bracketed by f'(0) = 1 and f'({cap}) = {at_cap}")]
    NotBracketed { threshold: f64, cap: f64, at_cap: f64 },
    #[error("F(g) does not change sign on [{g_min}, {g_start}]")]
    NoCrossing { g_min: f64, g_start: f64 },
    #[error("step {step} too large: F jumped by {jump} near g = {at}")]
    StepTooLarge { step: f64, jump: f64, at: f64 },
    #[error("shooting residuals at kappa = {lo} and {hi} have the same sign")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("cannot parse number {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
