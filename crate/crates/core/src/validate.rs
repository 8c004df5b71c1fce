//! Randomized cross-validation of the three computation paths.
//!
//! `fast_validation` compares the Gaussian moment engine against the
//! closed-form coefficient algebra over the full parameter space.
//! `oracle_validation` compares the engine against the truncated-Fock-space
//! oracle in the oracle's validated small regime; configurations the oracle
//! cannot certify (truncation leakage) are counted as inconclusive and
//! resampled, never as failures.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock;
use crate::gaussian::InputSpec;
use crate::interferometer::{lcc_rp1, phase_sensing_number, run, InterferometerConfig, MODE_A};
use crate::linalg::scaled_gap;
use crate::sensitivity::{closed_form_mean, closed_form_variance, slope};

/// One named comparison with its worst observed gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCheck {
    pub name: String,
    /// Largest gap seen (absolute below magnitude 1, relative above).
    pub worst_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Configurations actually compared.
    pub count: usize,
    /// Configurations skipped because the oracle could not certify them.
    pub inconclusive: usize,
}

/// Outcome of a validation suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub checks: Vec<ValidationCheck>,
    pub passed: bool,
}

impl ValidationSummary {
    fn from_checks(checks: Vec<ValidationCheck>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        ValidationSummary { checks, passed }
    }
}

fn gap_check(
    name: &str,
    tolerance: f64,
    gaps: &[f64],
    inconclusive: usize,
) -> ValidationCheck {
    let worst_gap = gaps.iter().cloned().fold(0.0, f64::max);
    ValidationCheck {
        name: name.to_string(),
        worst_gap,
        tolerance,
        passed: worst_gap <= tolerance && gaps.iter().all(|g| g.is_finite()),
        count: gaps.len(),
        inconclusive,
    }
}

fn draw_input(rng: &mut ChaCha8Rng, alpha_max: f64, r_max: f64) -> InputSpec {
    let tau = std::f64::consts::TAU;
    match rng.gen_range(0..3) {
        0 => InputSpec::vacuum(),
        1 => InputSpec::coherent(rng.gen_range(0.0..alpha_max), rng.gen_range(0.0..tau)),
        _ => InputSpec::squeezed_coherent(
            rng.gen_range(0.0..alpha_max),
            rng.gen_range(0.0..tau),
            rng.gen_range(0.0..r_max),
            rng.gen_range(0.0..tau),
        ),
    }
}

/// Unrestricted configuration draw for engine/closed-form comparisons.
fn draw_full_config(rng: &mut ChaCha8Rng) -> InterferometerConfig {
    let tau = std::f64::consts::TAU;
    InterferometerConfig {
        g1: rng.gen_range(0.0..2.0),
        g2: rng.gen_range(0.0..2.0),
        theta1: rng.gen_range(0.0..tau),
        theta2: rng.gen_range(0.0..tau),
        phi: rng.gen_range(0.0..tau),
        transmission: rng.gen_range(0.0..1.0),
        gamma_tau: rng.gen_range(0.0..1.5),
        input_a: draw_input(rng, 3.0, 1.5),
        input_b: draw_input(rng, 2.0, 1.2),
    }
}

/// Small-regime draw the truncated oracle can certify at moderate cutoffs.
fn draw_small_config(rng: &mut ChaCha8Rng) -> InterferometerConfig {
    let tau = std::f64::consts::TAU;
    InterferometerConfig {
        g1: rng.gen_range(0.0..0.8),
        g2: rng.gen_range(0.0..0.8),
        theta1: rng.gen_range(0.0..tau),
        theta2: rng.gen_range(0.0..tau),
        phi: rng.gen_range(0.0..tau),
        transmission: rng.gen_range(0.1..1.0),
        gamma_tau: rng.gen_range(0.0..1.0),
        input_a: draw_input(rng, 1.2, 0.5),
        input_b: draw_input(rng, 0.8, 0.3),
    }
}

/// Closed-form phase-sensing quanta for arbitrary uncorrelated inputs:
/// `n_ph = (N_a + N_b)(1 + G) + G + 4 cosh g₁ sinh g₁ · Re(e^{iθ₁} α* β*)`
/// with `G = 2 sinh²g₁`.
fn closed_form_probe_number(config: &InterferometerConfig) -> f64 {
    let gain = 2.0 * config.g1.sinh().powi(2);
    let n_in = config.input_a.mean_photons() + config.input_b.mean_photons();
    let cross = 4.0
        * config.g1.cosh()
        * config.g1.sinh()
        * (num_complex::Complex64::from_polar(1.0, config.theta1)
            * config.alpha().conj()
            * config.beta().conj())
        .re;
    n_in * (1.0 + gain) + gain + cross
}

/// Engine vs closed-form suite over `samples` unrestricted random draws.
///
/// Checks: output mean and variance (tolerance 1e-10), analytic vs
/// finite-difference slope (1e-6), probe number (1e-10), and the post-pulse
/// arm correlation against cos θ₁ tanh 2g₁ on vacuum inputs (1e-10).
pub fn fast_validation(samples: usize, seed: u64) -> Result<ValidationSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean_gaps = Vec::with_capacity(samples);
    let mut var_gaps = Vec::with_capacity(samples);
    let mut slope_gaps = Vec::with_capacity(samples);
    let mut nph_gaps = Vec::with_capacity(samples);
    let mut lcc_gaps = Vec::with_capacity(samples);
    for _ in 0..samples {
        let config = draw_full_config(&mut rng);
        let out = run(&config)?.output.moments(MODE_A)?;
        mean_gaps.push(scaled_gap(out.mean_x, closed_form_mean(&config)?));
        var_gaps.push(scaled_gap(out.var_x, closed_form_variance(&config)?));
        let s = slope(&config)?;
        slope_gaps.push(scaled_gap(s.numeric, s.analytic));
        nph_gaps.push(scaled_gap(
            phase_sensing_number(&config)?.n_ph,
            closed_form_probe_number(&config),
        ));
        // Correlation closed form holds for vacuum inputs.
        let vac = InterferometerConfig {
            input_a: InputSpec::vacuum(),
            input_b: InputSpec::vacuum(),
            ..config
        };
        let expected = config.theta1.cos() * (2.0 * config.g1).tanh();
        lcc_gaps.push(scaled_gap(lcc_rp1(&vac)?, expected));
    }
    Ok(ValidationSummary::from_checks(vec![
        gap_check("mean: engine vs closed form", 1e-10, &mean_gaps, 0),
        gap_check("variance: engine vs closed form", 1e-10, &var_gaps, 0),
        gap_check("slope: finite difference vs analytic", 1e-6, &slope_gaps, 0),
        gap_check("probe number: engine vs closed form", 1e-10, &nph_gaps, 0),
        gap_check("arm correlation: engine vs closed form", 1e-10, &lcc_gaps, 0),
    ]))
}

/// Engine vs Fock-oracle suite: keeps drawing small-regime configurations
/// until `samples` of them are certified (cutoff precheck passed and leakage
/// under `leakage_threshold`); uncertifiable draws count as inconclusive.
pub fn oracle_validation(
    samples: usize,
    cutoff: usize,
    seed: u64,
    leakage_threshold: f64,
) -> Result<ValidationSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean_gaps = Vec::with_capacity(samples);
    let mut cov_gaps = Vec::with_capacity(samples);
    let mut lcc_gaps = Vec::with_capacity(samples);
    let mut n_gaps = Vec::with_capacity(samples);
    let mut inconclusive = 0usize;
    let mut attempts = 0usize;
    let max_attempts = samples.saturating_mul(50).max(1000);
    while mean_gaps.len() < samples && attempts < max_attempts {
        attempts += 1;
        let config = draw_small_config(&mut rng);
        // Occupancy precheck through the engine before paying for the oracle.
        if fock::suggested_cutoff(&config)? > cutoff {
            inconclusive += 1;
            continue;
        }
        let outcome = match fock::simulate(&config, cutoff, leakage_threshold) {
            Ok(o) => o,
            Err(Error::LeakageExceeded { .. }) => {
                inconclusive += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let engine = run(&config)?.output;
        let mean_gap = engine
            .mean()
            .iter()
            .zip(outcome.reconstructed.mean().iter())
            .map(|(&a, &b)| scaled_gap(a, b))
            .fold(0.0, f64::max);
        let cov_gap = engine
            .cov()
            .iter()
            .zip(outcome.reconstructed.cov().iter())
            .map(|(&a, &b)| scaled_gap(a, b))
            .fold(0.0, f64::max);
        mean_gaps.push(mean_gap);
        cov_gaps.push(cov_gap);
        lcc_gaps.push(scaled_gap(engine.lcc(0, 1)?, outcome.lcc));
        let n_gap = scaled_gap(engine.photon_number(0)?, outcome.n_a)
            .max(scaled_gap(engine.photon_number(1)?, outcome.n_b));
        n_gaps.push(n_gap);
    }
    Ok(ValidationSummary::from_checks(vec![
        gap_check("output mean: engine vs oracle", 1e-4, &mean_gaps, inconclusive),
        gap_check(
            "output covariance: engine vs oracle",
            1e-4,
            &cov_gaps,
            inconclusive,
        ),
        gap_check(
            "output correlation: engine vs oracle",
            1e-5,
            &lcc_gaps,
            inconclusive,
        ),
        gap_check(
            "photon numbers: engine vs oracle",
            1e-4,
            &n_gaps,
            inconclusive,
        ),
    ]))
}
