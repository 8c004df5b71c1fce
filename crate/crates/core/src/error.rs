//! Error type shared by all computation paths.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument was NaN or infinite.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// A numeric argument was finite but outside its admissible range.
    #[error("{name} = {value} violates constraint: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A mode index pointed past the end of the state.
    #[error("mode index {index} out of range for a {mode_count}-mode state")]
    ModeIndex { index: usize, mode_count: usize },

    /// A channel was applied to the wrong number of target modes.
    #[error("channel acts on {expected} mode(s) but {actual} target indices were given")]
    ModeCountMismatch { expected: usize, actual: usize },

    /// The same mode index appeared twice in a target list.
    #[error("duplicate mode index {index} in target list")]
    DuplicateMode { index: usize },

    /// A correlation coefficient was requested for a degenerate quadrature.
    #[error("correlation undefined: quadrature variance of mode {mode} is degenerate")]
    DegenerateVariance { mode: usize },

    /// The fringe slope vanishes, so error propagation cannot assign a phase
    /// uncertainty at this operating point.
    #[error("non-informative operating point: |d<X_a>/dphi| is numerically zero")]
    NonInformativePoint,

    /// The requested finite-difference step is below the supported floor.
    #[error("finite-difference step {step:e} underflows the 1e-9 floor")]
    StepUnderflow { step: f64 },

    /// The optimizer saw no usable variation over its scan grid.
    #[error("flat landscape: objective varies by less than 1e-14 over the scan grid")]
    FlatLandscape,

    /// `optimize` was called with an empty free-parameter list.
    #[error("no free parameters given to optimize")]
    NoFreeParameters,

    /// A free parameter does not exist for the configured input kind.
    #[error("free parameter {param} is not available for input kind {kind}")]
    FreeParamUnavailable {
        param: &'static str,
        kind: &'static str,
    },

    /// Truncated-Fock-space population reached the cutoff boundary.
    #[error("truncation leakage {leakage:.3e} exceeds threshold {threshold:.3e} at stage: {stage}")]
    LeakageExceeded {
        leakage: f64,
        threshold: f64,
        stage: &'static str,
    },

    /// Baseline limits need a strictly positive probe number.
    #[error("probe photon number must be positive and finite, got {n_ph}")]
    NonPositiveProbeNumber { n_ph: f64 },
}
