//! Simulator and analyzer for an SU(1,1)-type hybrid interferometer built from
//! two Raman two-mode squeezers acting on an optical mode and a collective
//! atomic mode, with photon loss, collisional dephasing and a phase shift in
//! between.
//!
//! Three mutually independent computation paths are provided and are expected
//! to agree wherever their domains overlap:
//!
//! * [`gaussian`] — exact second-moment propagation of Gaussian states,
//! * [`sensitivity`] — closed-form input/output coefficient algebra,
//! * [`fock`] — a truncated-Fock-space density-matrix oracle.
//!
//! Quadrature convention throughout: `X = (a + a†)/2`, `P = (a − a†)/(2i)`,
//! so the vacuum has mean zero and covariance `diag(1/4, 1/4)`.

pub mod error;
pub mod gaussian;
pub mod interferometer;
pub mod sensitivity;
pub mod fock;
pub mod validate;

mod linalg;

pub use error::{Error, Result};
