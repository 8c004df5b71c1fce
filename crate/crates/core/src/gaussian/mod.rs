//! Gaussian moment engine: states are (mean vector, covariance matrix) pairs,
//! channels are affine maps `cov → X cov Xᵀ + Y`, `mean → X mean + d`.

mod channel;
mod input;
mod state;

pub use channel::GaussianChannel;
pub use input::{prepare_input, InputKind, InputSpec};
pub use state::{symplectic_form, GaussianState, ModeMoments, VACUUM_VAR};
