//! Input-state specification and preparation for the two interferometer arms.
//!
//! Supported single-mode inputs: vacuum, coherent |α⟩ and displaced squeezed
//! states D(α)S(ζ)|0⟩ with ζ = r e^{iθ_s}, under the squeezing convention
//! `a → cosh(r)·a − e^{iθ_s} sinh(r)·a†`, so θ_s = 0 squeezes the X
//! quadrature (Var X = e^{−2r}/4).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::state::GaussianState;

/// Which family the input state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Vacuum,
    Coherent,
    SqueezedCoherent,
}

/// Parameters of a single-mode input state.
///
/// `alpha_mag`/`alpha_phase` give the displacement α = |α|e^{iθ_α};
/// `r`/`theta_s` give the squeezing ζ = r e^{iθ_s}. Unused parameters must
/// stay at zero for the chosen `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub kind: InputKind,
    #[serde(default)]
    pub alpha_mag: f64,
    #[serde(default)]
    pub alpha_phase: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub theta_s: f64,
}

impl Default for InputSpec {
    fn default() -> Self {
        InputSpec::vacuum()
    }
}

impl InputSpec {
    pub fn vacuum() -> Self {
        InputSpec {
            kind: InputKind::Vacuum,
            alpha_mag: 0.0,
            alpha_phase: 0.0,
            r: 0.0,
            theta_s: 0.0,
        }
    }

    pub fn coherent(alpha_mag: f64, alpha_phase: f64) -> Self {
        InputSpec {
            kind: InputKind::Coherent,
            alpha_mag,
            alpha_phase,
            r: 0.0,
            theta_s: 0.0,
        }
    }

    pub fn squeezed_coherent(alpha_mag: f64, alpha_phase: f64, r: f64, theta_s: f64) -> Self {
        InputSpec {
            kind: InputKind::SqueezedCoherent,
            alpha_mag,
            alpha_phase,
            r,
            theta_s,
        }
    }

    /// Mean photon number |α|² + sinh²r of the prepared state.
    pub fn mean_photons(&self) -> f64 {
        self.n_alpha() + self.r.sinh().powi(2)
    }

    /// Coherent contribution N_α = |α|².
    pub fn n_alpha(&self) -> f64 {
        self.alpha_mag * self.alpha_mag
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("alpha_mag", self.alpha_mag),
            ("alpha_phase", self.alpha_phase),
            ("r", self.r),
            ("theta_s", self.theta_s),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if self.alpha_mag < 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha_mag",
                value: self.alpha_mag,
                constraint: "alpha_mag >= 0",
            });
        }
        if self.r < 0.0 {
            return Err(Error::InvalidParameter {
                name: "r",
                value: self.r,
                constraint: "r >= 0",
            });
        }
        match self.kind {
            InputKind::Vacuum => {
                if self.alpha_mag != 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "alpha_mag",
                        value: self.alpha_mag,
                        constraint: "vacuum input requires alpha_mag = 0",
                    });
                }
                if self.r != 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "r",
                        value: self.r,
                        constraint: "vacuum input requires r = 0",
                    });
                }
            }
            InputKind::Coherent => {
                if self.r != 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "r",
                        value: self.r,
                        constraint: "coherent input requires r = 0",
                    });
                }
            }
            InputKind::SqueezedCoherent => {}
        }
        Ok(())
    }
}

/// Builds the single-mode Gaussian moments of the specified input state.
pub fn prepare_input(spec: &InputSpec) -> Result<GaussianState> {
    spec.validate()?;
    let mean = DVector::from_vec(vec![
        spec.alpha_mag * spec.alpha_phase.cos(),
        spec.alpha_mag * spec.alpha_phase.sin(),
    ]);
    // Covariance of S(ζ)|0⟩: (1/4) M² with the symmetric symplectic
    // M = [[c − s·cosθ_s, −s·sinθ_s], [−s·sinθ_s, c + s·cosθ_s]].
    let ch = (2.0 * spec.r).cosh();
    let sh = (2.0 * spec.r).sinh();
    let cov = DMatrix::from_row_slice(
        2,
        2,
        &[
            (ch - sh * spec.theta_s.cos()) / 4.0,
            -sh * spec.theta_s.sin() / 4.0,
            -sh * spec.theta_s.sin() / 4.0,
            (ch + sh * spec.theta_s.cos()) / 4.0,
        ],
    );
    GaussianState::from_moments(mean, cov)
}
