//! Truncated-Fock-space oracle.
//!
//! This path never touches the Gaussian formalism: inputs are prepared as
//! state vectors, every element of the pipeline acts on a dense two-mode
//! density matrix (unitaries per conserved sector, loss as a full Kraus sum),
//! and Gaussian moments are read back from number-basis expectation values.
//! Agreement with the moment engine is therefore an independent check of the
//! whole chain, limited only by truncation — which is monitored as population
//! of the top two levels of each mode and enforced against a threshold.

mod ops;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::interferometer::{run, InterferometerConfig};

/// Default bound on acceptable boundary-level population.
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-8;

/// Moments and diagnostics extracted from the oracle's output state.
#[derive(Debug, Clone)]
pub struct FockOutcome {
    /// Two-mode Gaussian state reconstructed from the oracle's first and
    /// second moments, directly comparable to the engine's output.
    pub reconstructed: GaussianState,
    /// Mean photon number of the optical mode.
    pub n_a: f64,
    /// Mean photon number of the atomic mode.
    pub n_b: f64,
    /// Quadrature correlation J(X_a, X_b) of the output state.
    pub lcc: f64,
    /// Worst boundary population seen at any checked stage.
    pub leakage: f64,
    /// |Tr ρ − 1| at the end of the pipeline.
    pub trace_defect: f64,
    /// Levels per mode used for the simulation.
    pub cutoff: usize,
}

/// Population of the top two levels of each mode.
fn boundary_population(rho: &DMatrix<Complex64>, d: usize) -> f64 {
    let mut leak = 0.0;
    for other in 0..d {
        for edge in [d - 1, d - 2] {
            leak += rho[(edge * d + other, edge * d + other)].re; // mode a at the edge
            leak += rho[(other * d + edge, other * d + edge)].re; // mode b at the edge
        }
    }
    leak
}

fn check_leakage(
    rho: &DMatrix<Complex64>,
    d: usize,
    threshold: f64,
    stage: &'static str,
    worst: &mut f64,
) -> Result<()> {
    let leak = boundary_population(rho, d);
    *worst = worst.max(leak);
    if leak > threshold {
        return Err(Error::LeakageExceeded {
            leakage: leak,
            threshold,
            stage,
        });
    }
    Ok(())
}

/// Raw expectation values needed to rebuild Gaussian moments.
struct RawMoments {
    a: Complex64,
    b: Complex64,
    a_sq: Complex64,
    b_sq: Complex64,
    n_a: f64,
    n_b: f64,
    ab: Complex64,
    ab_dag: Complex64,
    trace: f64,
}

fn raw_moments(rho: &DMatrix<Complex64>, d: usize) -> RawMoments {
    let mut m = RawMoments {
        a: Complex64::default(),
        b: Complex64::default(),
        a_sq: Complex64::default(),
        b_sq: Complex64::default(),
        n_a: 0.0,
        n_b: 0.0,
        ab: Complex64::default(),
        ab_dag: Complex64::default(),
        trace: 0.0,
    };
    for na in 0..d {
        for nb in 0..d {
            let j = na * d + nb;
            let diag = rho[(j, j)].re;
            m.trace += diag;
            m.n_a += na as f64 * diag;
            m.n_b += nb as f64 * diag;
            if na >= 1 {
                m.a += (na as f64).sqrt() * rho[(j, j - d)];
            }
            if nb >= 1 {
                m.b += (nb as f64).sqrt() * rho[(j, j - 1)];
            }
            if na >= 2 {
                m.a_sq += ((na * (na - 1)) as f64).sqrt() * rho[(j, j - 2 * d)];
            }
            if nb >= 2 {
                m.b_sq += ((nb * (nb - 1)) as f64).sqrt() * rho[(j, j - 2)];
            }
            if na >= 1 && nb >= 1 {
                m.ab += ((na * nb) as f64).sqrt() * rho[(j, j - d - 1)];
            }
            if na >= 1 && nb + 2 <= d {
                m.ab_dag += ((na * (nb + 1)) as f64).sqrt() * rho[(j, j - d + 1)];
            }
        }
    }
    m
}

/// Gaussian state whose first and second moments match the density matrix.
fn reconstruct(m: &RawMoments) -> Result<GaussianState> {
    let t = m.trace;
    let (a, b) = (m.a / t, m.b / t);
    let (a_sq, b_sq) = (m.a_sq / t, m.b_sq / t);
    let (n_a, n_b) = (m.n_a / t, m.n_b / t);
    let (ab, ab_dag) = (m.ab / t, m.ab_dag / t);

    let mean = DVector::from_row_slice(&[a.re, a.im, b.re, b.im]);
    // Single-mode blocks from ⟨â⟩, ⟨â²⟩, ⟨n̂⟩ with X = (â+â†)/2.
    let var_x_a = (2.0 * a_sq.re + 2.0 * n_a + 1.0) / 4.0 - a.re * a.re;
    let var_p_a = (-2.0 * a_sq.re + 2.0 * n_a + 1.0) / 4.0 - a.im * a.im;
    let cov_xp_a = a_sq.im / 2.0 - a.re * a.im;
    let var_x_b = (2.0 * b_sq.re + 2.0 * n_b + 1.0) / 4.0 - b.re * b.re;
    let var_p_b = (-2.0 * b_sq.re + 2.0 * n_b + 1.0) / 4.0 - b.im * b.im;
    let cov_xp_b = b_sq.im / 2.0 - b.re * b.im;
    // Cross-mode block from ⟨âb̂⟩ and ⟨âb̂†⟩.
    let xa_xb = (ab.re + ab_dag.re) / 2.0 - a.re * b.re;
    let xa_pb = (ab.im - ab_dag.im) / 2.0 - a.re * b.im;
    let pa_xb = (ab.im + ab_dag.im) / 2.0 - a.im * b.re;
    let pa_pb = (ab_dag.re - ab.re) / 2.0 - a.im * b.im;

    let cov = DMatrix::from_row_slice(
        4,
        4,
        &[
            var_x_a, cov_xp_a, xa_xb, xa_pb, //
            cov_xp_a, var_p_a, pa_xb, pa_pb, //
            xa_xb, pa_xb, var_x_b, cov_xp_b, //
            xa_pb, pa_pb, cov_xp_b, var_p_b,
        ],
    );
    GaussianState::from_moments(mean, cov)
}

/// Runs the full pipeline exactly on the truncated space.
///
/// Leakage is checked after preparation, after the first squeezer, and after
/// the second squeezer (loss, dephasing and the phase shift cannot raise
/// occupancy). All reported moments are normalized by the final trace.
pub fn simulate(
    config: &InterferometerConfig,
    cutoff: usize,
    leakage_threshold: f64,
) -> Result<FockOutcome> {
    config.validate()?;
    if cutoff < 4 || cutoff > 4096 {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            value: cutoff as f64,
            constraint: "4 <= cutoff <= 4096 levels per mode",
        });
    }
    if !leakage_threshold.is_finite() || leakage_threshold <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "leakage_threshold",
            value: leakage_threshold,
            constraint: "must be positive and finite",
        });
    }
    let d = cutoff;
    let psi_a = ops::prepare_mode(d, &config.input_a);
    let psi_b = ops::prepare_mode(d, &config.input_b);
    let joint = DVector::from_fn(d * d, |i, _| psi_a[i / d] * psi_b[i % d]);
    let mut rho = &joint * joint.adjoint();
    let mut worst_leak = 0.0;
    check_leakage(&rho, d, leakage_threshold, "input", &mut worst_leak)?;

    rho = ops::tms_unitary(d, config.g1, config.theta1).conjugate(&rho);
    check_leakage(&rho, d, leakage_threshold, "after_rp1", &mut worst_leak)?;

    rho = ops::apply_loss(&rho, d, config.transmission, 0);
    ops::apply_phase_mode_a(&mut rho, d, config.phi);
    rho = ops::apply_loss(&rho, d, (-2.0 * config.gamma_tau).exp(), 1);

    rho = ops::tms_unitary(d, config.g2, config.theta2).conjugate(&rho);
    check_leakage(&rho, d, leakage_threshold, "output", &mut worst_leak)?;

    let m = raw_moments(&rho, d);
    let reconstructed = reconstruct(&m)?;
    let lcc = reconstructed.lcc(0, 1)?;
    Ok(FockOutcome {
        n_a: m.n_a / m.trace,
        n_b: m.n_b / m.trace,
        lcc,
        leakage: worst_leak,
        trace_defect: (m.trace - 1.0).abs(),
        cutoff,
        reconstructed,
    })
}

/// Cutoff estimate from the engine's per-stage occupancy: the largest
/// `⌈n̄ + 6√Var n̂⌉ + 2` over both modes at input, mid-point and output.
///
/// This is a mean-and-spread heuristic: states with slowly decaying number
/// tails (strong squeezing or high gain) can still leak past it, which is
/// why [`simulate`] enforces the leakage threshold independently.
pub fn suggested_cutoff(config: &InterferometerConfig) -> Result<usize> {
    config.validate()?;
    let result = run(config)?;
    let mut needed = 8usize;
    for state in [&result.after_rp1, &result.mid, &result.output] {
        for mode in 0..2 {
            let (mean, var) = state.number_stats(mode)?;
            let top = mean + 6.0 * var.max(0.0).sqrt();
            needed = needed.max(top.ceil() as usize + 2);
        }
    }
    Ok(needed)
}
