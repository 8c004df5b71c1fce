//! The full two-pulse pipeline: a first two-mode squeezer entangles the
//! optical mode `a` with the atomic mode `b`; the optical arm then passes a
//! loss channel and picks up the interferometer phase while the atomic arm
//! dephases; a second squeezer recombines the arms.
//!
//! Two independent computation paths are exposed: [`run`] propagates Gaussian
//! moments channel by channel, while [`coeffs`] evaluates the closed-form
//! Bogoliubov coefficients of the composite transformation
//! `â₂ = U₁ â₀ + V₁ b̂₀† + noise`. They must agree to numerical precision;
//! the comparison is wired through `validate`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{prepare_input, GaussianChannel, GaussianState, InputSpec};

/// All physical knobs of one interferometer configuration.
///
/// `transmission` serializes as `T` to match the usual naming of the optical
/// power transmission; `input_b` (the atomic mode) defaults to vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerConfig {
    /// Gain of the first Raman pulse.
    pub g1: f64,
    /// Gain of the second Raman pulse.
    pub g2: f64,
    /// Pump phase of the first pulse.
    #[serde(default)]
    pub theta1: f64,
    /// Pump phase of the second pulse; π − θ1 difference gives the balanced
    /// (undo) configuration, which is the default.
    #[serde(default = "default_theta2")]
    pub theta2: f64,
    /// Interferometer phase on the optical arm.
    #[serde(default)]
    pub phi: f64,
    /// Optical power transmission between the pulses.
    #[serde(default = "default_transmission", rename = "T")]
    pub transmission: f64,
    /// Collisional dephasing exponent Γτ of the atomic arm.
    #[serde(default)]
    pub gamma_tau: f64,
    /// Input state of the optical (phase-sensing) mode.
    #[serde(default)]
    pub input_a: InputSpec,
    /// Input state of the atomic mode.
    #[serde(default)]
    pub input_b: InputSpec,
}

fn default_theta2() -> f64 {
    std::f64::consts::PI
}

fn default_transmission() -> f64 {
    1.0
}

impl InterferometerConfig {
    /// Balanced lossless configuration: equal gains, pump phases 0 and π,
    /// φ = 0, vacuum atomic input.
    pub fn balanced(g: f64, input_a: InputSpec) -> Self {
        InterferometerConfig {
            g1: g,
            g2: g,
            theta1: 0.0,
            theta2: std::f64::consts::PI,
            phi: 0.0,
            transmission: 1.0,
            gamma_tau: 0.0,
            input_a,
            input_b: InputSpec::vacuum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("g1", self.g1),
            ("g2", self.g2),
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("phi", self.phi),
            ("T", self.transmission),
            ("gamma_tau", self.gamma_tau),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        for (name, value) in [("g1", self.g1), ("g2", self.g2)] {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    constraint: "gain >= 0",
                });
            }
        }
        if !(0.0..=1.0).contains(&self.transmission) {
            return Err(Error::InvalidParameter {
                name: "T",
                value: self.transmission,
                constraint: "0 <= T <= 1",
            });
        }
        if self.gamma_tau < 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma_tau",
                value: self.gamma_tau,
                constraint: "gamma_tau >= 0",
            });
        }
        self.input_a.validate()?;
        self.input_b.validate()?;
        Ok(())
    }

    /// True when the second pulse exactly mirrors the first: g1 = g2 and
    /// θ2 − θ1 = π (mod 2π), both to 1e-12.
    pub fn is_balanced(&self) -> bool {
        let tau = std::f64::consts::TAU;
        let d = (self.theta2 - self.theta1 - std::f64::consts::PI).rem_euclid(tau);
        let angle_gap = d.min(tau - d);
        (self.g1 - self.g2).abs() <= 1e-12 && angle_gap <= 1e-12
    }

    /// Complex displacement α = |α|e^{iθ_α} of the optical input.
    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.input_a.alpha_mag, self.input_a.alpha_phase)
    }

    /// Complex displacement of the atomic input.
    pub fn beta(&self) -> Complex64 {
        Complex64::from_polar(self.input_b.alpha_mag, self.input_b.alpha_phase)
    }
}

/// Snapshots of the Gaussian state along the pipeline.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// Two-mode state right after the first squeezer.
    pub after_rp1: GaussianState,
    /// State after loss, phase shift and dephasing, before the second pulse.
    pub mid: GaussianState,
    /// Final output state.
    pub output: GaussianState,
}

/// Mode index of the optical arm in all two-mode states.
pub const MODE_A: usize = 0;
/// Mode index of the atomic arm.
pub const MODE_B: usize = 1;

fn state_after_rp1(config: &InterferometerConfig) -> Result<GaussianState> {
    let input = prepare_input(&config.input_a)?.tensor(&prepare_input(&config.input_b)?);
    GaussianChannel::two_mode_squeezer(config.g1, config.theta1)?
        .apply(&input, &[MODE_A, MODE_B])
}

/// Propagates Gaussian moments through the whole pipeline.
pub fn run(config: &InterferometerConfig) -> Result<RunResult> {
    config.validate()?;
    let after_rp1 = state_after_rp1(config)?;
    // Loss first, then the phase shift; the two commute because the loss
    // noise is isotropic in the quadrature plane.
    let mut mid = GaussianChannel::loss(config.transmission)?.apply(&after_rp1, &[MODE_A])?;
    mid = GaussianChannel::phase_shift(config.phi)?.apply(&mid, &[MODE_A])?;
    mid = GaussianChannel::dephase(config.gamma_tau)?.apply(&mid, &[MODE_B])?;
    let output = GaussianChannel::two_mode_squeezer(config.g2, config.theta2)?
        .apply(&mid, &[MODE_A, MODE_B])?;
    Ok(RunResult {
        after_rp1,
        mid,
        output,
    })
}

/// Closed-form coefficients of the composite input–output transformation.
///
/// With pulse coefficients uᵢ = cosh gᵢ, vᵢ = e^{iθᵢ} sinh gᵢ:
///
/// ```text
/// â₂        = U1·â₀ + V1·b̂₀† + √R·u₂·V̂ + v₂·F̂†
/// e^{iφ}b̂₂ = U2·b̂₀ + V2·â₀† + e^{iφ}(u₂·F̂ + √R·v₂·V̂†)
/// ```
///
/// where V̂ is the vacuum mode admixed by the loss and F̂ the dephasing
/// Langevin noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffSet {
    /// Coefficient of â₀ in â₂.
    pub u1: Complex64,
    /// Coefficient of b̂₀† in â₂.
    pub v1: Complex64,
    /// Coefficient of b̂₀ in e^{iφ}·b̂₂.
    pub u2: Complex64,
    /// Coefficient of â₀† in e^{iφ}·b̂₂.
    pub v2: Complex64,
    /// Lossless single-pair coefficients U, V (only when T = 1 and Γτ = 0),
    /// satisfying |U|² − |V|² = 1.
    pub lossless_u: Option<Complex64>,
    pub lossless_v: Option<Complex64>,
}

/// Evaluates the closed-form output coefficients for a configuration.
pub fn coeffs(config: &InterferometerConfig) -> Result<CoeffSet> {
    config.validate()?;
    let u1p = Complex64::new(config.g1.cosh(), 0.0);
    let v1p = Complex64::from_polar(config.g1.sinh(), config.theta1);
    let u2p = Complex64::new(config.g2.cosh(), 0.0);
    let v2p = Complex64::from_polar(config.g2.sinh(), config.theta2);
    let sqrt_t = Complex64::new(config.transmission.sqrt(), 0.0);
    let decay = Complex64::new((-config.gamma_tau).exp(), 0.0);
    let phase = Complex64::from_polar(1.0, config.phi);

    let u1 = sqrt_t * u1p * u2p * phase + decay * v1p.conj() * v2p;
    let v1 = sqrt_t * v1p * u2p * phase + decay * u1p.conj() * v2p;
    let u2 = decay * u1p * u2p * phase + sqrt_t * v1p.conj() * v2p;
    let v2 = decay * v1p * u2p * phase + sqrt_t * u1p.conj() * v2p;

    let lossless = config.transmission == 1.0 && config.gamma_tau == 0.0;
    Ok(CoeffSet {
        u1,
        v1,
        u2,
        v2,
        lossless_u: lossless.then_some(u1),
        lossless_v: lossless.then_some(v1),
    })
}

/// Where the probe-number baseline is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineConvention {
    /// Quanta counted inside the interferometer, right after the first pulse
    /// (before loss and dephasing act). This is the default.
    #[default]
    PreLoss,
    /// Quanta counted just before the second pulse, after loss and dephasing.
    PostLoss,
}

impl std::fmt::Display for BaselineConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaselineConvention::PreLoss => write!(f, "pre_loss"),
            BaselineConvention::PostLoss => write!(f, "post_loss"),
        }
    }
}

/// Phase-sensing quanta split by arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeNumber {
    /// Total phase-sensing quanta n_ph = photons + atomic excitations.
    pub n_ph: f64,
    /// Photons in the optical arm.
    pub n_photon: f64,
    /// Collective excitations in the atomic arm.
    pub n_atom: f64,
}

/// Probe number in the stated convention.
pub fn probe_number(
    config: &InterferometerConfig,
    convention: BaselineConvention,
) -> Result<ProbeNumber> {
    config.validate()?;
    let state = match convention {
        BaselineConvention::PreLoss => state_after_rp1(config)?,
        BaselineConvention::PostLoss => run(config)?.mid,
    };
    let n_photon = state.photon_number(MODE_A)?;
    let n_atom = state.photon_number(MODE_B)?;
    Ok(ProbeNumber {
        n_ph: n_photon + n_atom,
        n_photon,
        n_atom,
    })
}

/// Probe number inside the interferometer (after the first pulse, before loss).
///
/// For a vacuum atomic input this reproduces
/// `n_ph = N_in + N_in·G + G` with `G = 2 sinh²g1` and
/// `N_in = |α|² + sinh²r` of the optical input.
pub fn phase_sensing_number(config: &InterferometerConfig) -> Result<ProbeNumber> {
    probe_number(config, BaselineConvention::PreLoss)
}

/// Quadrature correlation between the arms right after the first pulse.
///
/// On vacuum inputs this equals cos θ1 · tanh 2g1.
pub fn lcc_rp1(config: &InterferometerConfig) -> Result<f64> {
    config.validate()?;
    state_after_rp1(config)?.lcc(MODE_A, MODE_B)
}

/// Quadrature correlation between the arms at the output.
///
/// Vanishes for the balanced lossless pipeline at φ = 0, for any inputs.
pub fn lcc_out(config: &InterferometerConfig) -> Result<f64> {
    Ok(run(config)?.output.lcc(MODE_A, MODE_B)?)
}
