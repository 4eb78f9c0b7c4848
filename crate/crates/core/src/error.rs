use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all toolkit modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported derivative order {got} (max {max})")]
    UnsupportedOrder { got: usize, max: usize },
    #[error("no turning point: {0}")]
    NoTurningPoint(String),
    #[error("degenerate turning point at x = {x}: |V'| = {slope:e} below threshold {threshold:e}")]
    DegenerateTurningPoint { x: f64, slope: f64, threshold: f64 },
    #[error("spec validation: {0}")]
    SpecValidation(String),
    #[error("out of regime: {0}")]
    OutOfRegime(String),
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error("volterra iteration did not contract: change ratio {ratio} after {iterations} iterations")]
    NonContraction { ratio: f64, iterations: usize },
    #[error("volterra iteration limit {limit} reached (last change {change:e})")]
    IterationLimit { limit: usize, change: f64 },
    #[error("nonvanishing precondition violated: {0}")]
    Nonvanishing(String),
    #[error("singular Wronskian")]
    SingularWronskian,
    #[error("step size collapsed at x = {x} (h = {h:e})")]
    StepCollapse { x: f64, h: f64 },
    #[error("accuracy: monitored Wronskian drift {drift:e} exceeds {allowed:e}")]
    WronskianDrift { drift: f64, allowed: f64 },
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("fit failure: {0}")]
    FitFailure(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
}
