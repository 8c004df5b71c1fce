//! Error-propagation phase sensitivity of the homodyne readout X̂_a2,
//! probe-number baselines, and operating-point optimization.
//!
//! Every quantity is computed along two independent paths — the Gaussian
//! moment engine and the closed-form coefficient algebra — and the report
//! carries their worst disagreement.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferometer::{
    coeffs, probe_number, run, BaselineConvention, InterferometerConfig, MODE_A,
};
use crate::linalg::scaled_gap;

/// Default central-difference step (rad) for the numeric slope.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Full diagnostic record of one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    /// Interferometer phase the report was evaluated at.
    pub phi: f64,
    /// Output mean ⟨X̂_a2⟩ (moment engine).
    pub mean_x: f64,
    /// d⟨X̂_a2⟩/dφ (closed form, signed).
    pub slope: f64,
    /// Output variance ⟨ΔX̂²_a2⟩ (moment engine).
    pub var_x: f64,
    /// Phase sensitivity √var_x / |slope|.
    pub delta_phi: f64,
    /// Phase-sensing quanta used for the baselines.
    pub n_ph: f64,
    /// Standard quantum limit 1/√n_ph.
    pub sql: f64,
    /// Heisenberg limit 1/n_ph.
    pub hl: f64,
    /// Worst engine/closed-form gap across mean and variance
    /// (absolute below 1, relative above).
    pub path_disagreement: f64,
}

/// Analytic and finite-difference estimates of the signal slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub analytic: f64,
    pub numeric: f64,
}

/// Engine and closed-form values of the same output statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPair {
    pub engine: f64,
    pub closed_form: f64,
}

/// SQL and HL baselines for a given probe number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub sql: f64,
    pub hl: f64,
}

/// Closed-form signal slope
/// `d⟨X̂_a2⟩/dφ = Re[i √T cosh g₂ e^{iφ} (cosh g₁·α + e^{iθ₁} sinh g₁·β*)]`,
/// exact for every configuration. With a vacuum atomic input it reduces to
/// `−√(T N_α) cosh g₁ cosh g₂ sin(φ + θ_α)`.
pub fn slope_analytic(config: &InterferometerConfig) -> Result<f64> {
    config.validate()?;
    let z = config.transmission.sqrt()
        * config.g2.cosh()
        * Complex64::from_polar(1.0, config.phi)
        * (config.g1.cosh() * config.alpha()
            + Complex64::from_polar(config.g1.sinh(), config.theta1) * config.beta().conj());
    Ok(-z.im)
}

fn engine_mean_x(config: &InterferometerConfig) -> Result<f64> {
    Ok(run(config)?.output.moments(MODE_A)?.mean_x)
}

/// Central finite difference of the engine's ⟨X̂_a2⟩ over φ.
pub fn slope_numeric(config: &InterferometerConfig, step: f64) -> Result<f64> {
    if !step.is_finite() || step < 1e-9 {
        return Err(Error::StepUnderflow { step });
    }
    let mut fwd = *config;
    fwd.phi = config.phi + step;
    let mut bwd = *config;
    bwd.phi = config.phi - step;
    Ok((engine_mean_x(&fwd)? - engine_mean_x(&bwd)?) / (2.0 * step))
}

/// Both slope estimates at the default step.
pub fn slope(config: &InterferometerConfig) -> Result<SlopeEstimate> {
    Ok(SlopeEstimate {
        analytic: slope_analytic(config)?,
        numeric: slope_numeric(config, DEFAULT_FD_STEP)?,
    })
}

/// Variance scaling `cosh 2r − sinh 2r · cos ψ` of a squeezed input as seen
/// through an output coefficient; ψ folds the coefficient argument into the
/// squeezing phase.
fn squeeze_factor(r: f64, psi: f64) -> f64 {
    (2.0 * r).cosh() - (2.0 * r).sinh() * psi.cos()
}

/// Closed-form output variance: squeezing-adjusted coefficient magnitudes
/// plus the vacuum noise admixed by loss and dephasing,
///
/// ```text
/// ⟨ΔX̂²_a2⟩ = |U₁|²·f_a/4 + |V₁|²·f_b/4
///           + [R·cosh²g₂ + sinh²g₂·(1 − e^{−2Γτ})]/4
/// ```
///
/// with `f_a = e^{2r}sin²Θ + e^{−2r}cos²Θ`, `Θ = θ_s/2 + arg U₁` for the
/// optical input (and the analogous factor with `arg V₁` for the atomic one).
pub fn closed_form_variance(config: &InterferometerConfig) -> Result<f64> {
    let c = coeffs(config)?;
    let f_a = squeeze_factor(config.input_a.r, 2.0 * c.u1.arg() + config.input_a.theta_s);
    let f_b = squeeze_factor(config.input_b.r, 2.0 * c.v1.arg() - config.input_b.theta_s);
    let reflectivity = 1.0 - config.transmission;
    let noise = reflectivity * config.g2.cosh().powi(2)
        + config.g2.sinh().powi(2) * (1.0 - (-2.0 * config.gamma_tau).exp());
    Ok((c.u1.norm_sqr() * f_a + c.v1.norm_sqr() * f_b + noise) / 4.0)
}

/// Closed-form output mean ⟨X̂_a2⟩ = Re(U₁ α + V₁ β*).
pub fn closed_form_mean(config: &InterferometerConfig) -> Result<f64> {
    let c = coeffs(config)?;
    Ok((c.u1 * config.alpha() + c.v1 * config.beta().conj()).re)
}

/// Output variance along both computation paths.
pub fn output_variance(config: &InterferometerConfig) -> Result<PathPair> {
    Ok(PathPair {
        engine: run(config)?.output.moments(MODE_A)?.var_x,
        closed_form: closed_form_variance(config)?,
    })
}

/// SQL and HL for a probe number.
pub fn limits(n_ph: f64) -> Result<Limits> {
    if !n_ph.is_finite() || n_ph <= 0.0 {
        return Err(Error::NonPositiveProbeNumber { n_ph });
    }
    Ok(Limits {
        sql: 1.0 / n_ph.sqrt(),
        hl: 1.0 / n_ph,
    })
}

/// Full sensitivity report with the probe number taken in `convention`.
pub fn delta_phi_with(
    config: &InterferometerConfig,
    convention: BaselineConvention,
) -> Result<SensitivityReport> {
    config.validate()?;
    let slope = slope_analytic(config)?;
    if slope == 0.0 {
        return Err(Error::NonInformativePoint);
    }
    let out = run(config)?.output.moments(MODE_A)?;
    let mean_gap = scaled_gap(out.mean_x, closed_form_mean(config)?);
    let var_gap = scaled_gap(out.var_x, closed_form_variance(config)?);
    let n_ph = probe_number(config, convention)?.n_ph;
    let limits = limits(n_ph)?;
    Ok(SensitivityReport {
        phi: config.phi,
        mean_x: out.mean_x,
        slope,
        var_x: out.var_x,
        delta_phi: out.var_x.sqrt() / slope.abs(),
        n_ph,
        sql: limits.sql,
        hl: limits.hl,
        path_disagreement: mean_gap.max(var_gap),
    })
}

/// Full sensitivity report with the default (pre-loss) baseline.
pub fn delta_phi(config: &InterferometerConfig) -> Result<SensitivityReport> {
    delta_phi_with(config, BaselineConvention::PreLoss)
}

/// The sensitivity-to-baseline diagnostic Δφ · n_ph (→ 1 means the
/// Heisenberg scaling is reached up to a constant).
pub fn hl_ratio(config: &InterferometerConfig) -> Result<f64> {
    let report = delta_phi(config)?;
    Ok(report.delta_phi * report.n_ph)
}

/// Best sensitivity of a balanced lossless pipeline with a coherent probe at
/// the optimal phases: `Δφ = 1/(2√N_α cosh²g)`.
pub fn optimal_delta_phi_coherent(n_alpha: f64, g: f64) -> f64 {
    1.0 / (2.0 * n_alpha.sqrt() * g.cosh().powi(2))
}

/// Coherent optimum improved by the squeezing factor e^{−r}.
pub fn optimal_delta_phi_squeezed(n_alpha: f64, g: f64, r: f64) -> f64 {
    (-r).exp() * optimal_delta_phi_coherent(n_alpha, g)
}

/// A parameter the optimizer may move. Phases of the optical input and the
/// interferometer phase are the knobs the operating point depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeParam {
    Phi,
    ThetaAlpha,
    ThetaS,
}

impl FreeParam {
    fn apply(self, config: &mut InterferometerConfig, value: f64) {
        match self {
            FreeParam::Phi => config.phi = value,
            FreeParam::ThetaAlpha => config.input_a.alpha_phase = value,
            FreeParam::ThetaS => config.input_a.theta_s = value,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FreeParam::Phi => "phi",
            FreeParam::ThetaAlpha => "theta_alpha",
            FreeParam::ThetaS => "theta_s",
        }
    }
}

/// Result of an operating-point search.
#[derive(Debug, Clone)]
pub struct Optimum {
    /// Refined parameter values, in the order the free parameters were given.
    /// Values are reported raw (not reduced mod 2π).
    pub params: Vec<(FreeParam, f64)>,
    /// Full report at the optimum.
    pub report: SensitivityReport,
}

const GRID_POINTS: usize = 720;
const REFINE_TOL: f64 = 1e-9;

/// Golden-section minimum of `f` on [a, b], to bracket width `tol`.
fn golden_min(mut a: f64, mut b: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const INVPHI2: f64 = 1.0 - INVPHI;
    let mut h = b - a;
    let mut c = a + INVPHI2 * h;
    let mut d = a + INVPHI * h;
    let mut fc = f(c);
    let mut fd = f(d);
    while h > REFINE_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + INVPHI2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + INVPHI * h;
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimizes Δφ over the listed free parameters.
///
/// Strategy: a dense cartesian grid (720 points per dimension over [0, 2π),
/// lexicographic scan with strict-improvement updates, so ties resolve toward
/// the smallest parameter values) followed by cyclic per-coordinate
/// golden-section refinement to 1e-8 in parameter. The objective is the
/// closed-form Δφ; the returned report re-evaluates the optimum through the
/// moment engine.
pub fn optimize(config: &InterferometerConfig, free: &[FreeParam]) -> Result<Optimum> {
    config.validate()?;
    let mut params: Vec<FreeParam> = Vec::new();
    for &p in free {
        if !params.contains(&p) {
            params.push(p);
        }
    }
    if params.is_empty() {
        return Err(Error::NoFreeParameters);
    }
    for &p in &params {
        let available = match p {
            FreeParam::Phi => true,
            FreeParam::ThetaAlpha => {
                config.input_a.kind != crate::gaussian::InputKind::Vacuum
            }
            FreeParam::ThetaS => {
                config.input_a.kind == crate::gaussian::InputKind::SqueezedCoherent
            }
        };
        if !available {
            return Err(Error::FreeParamUnavailable {
                param: p.name(),
                kind: match config.input_a.kind {
                    crate::gaussian::InputKind::Vacuum => "vacuum",
                    crate::gaussian::InputKind::Coherent => "coherent",
                    crate::gaussian::InputKind::SqueezedCoherent => "squeezed_coherent",
                },
            });
        }
    }

    // Closed-form objective; slope-free points are infeasible, not errors.
    let objective = |values: &[f64]| -> f64 {
        let mut cfg = *config;
        for (&p, &v) in params.iter().zip(values) {
            p.apply(&mut cfg, v);
        }
        let slope = match slope_analytic(&cfg) {
            Ok(s) => s,
            Err(_) => return f64::INFINITY,
        };
        if slope == 0.0 {
            return f64::INFINITY;
        }
        match closed_form_variance(&cfg) {
            Ok(var) => var.sqrt() / slope.abs(),
            Err(_) => f64::INFINITY,
        }
    };

    let dims = params.len();
    let step = std::f64::consts::TAU / GRID_POINTS as f64;
    let mut indices = vec![0usize; dims];
    let mut values = vec![0.0f64; dims];
    let mut best_values = vec![0.0f64; dims];
    let mut best = f64::INFINITY;
    let mut finite_min = f64::INFINITY;
    let mut finite_max = f64::NEG_INFINITY;
    loop {
        for (v, &i) in values.iter_mut().zip(&indices) {
            *v = i as f64 * step;
        }
        let obj = objective(&values);
        if obj.is_finite() {
            finite_min = finite_min.min(obj);
            finite_max = finite_max.max(obj);
        }
        if obj < best {
            best = obj;
            best_values.copy_from_slice(&values);
        }
        // Odometer increment, last dimension fastest, so the scan is
        // lexicographically ascending.
        let mut dim = dims;
        loop {
            if dim == 0 {
                break;
            }
            dim -= 1;
            indices[dim] += 1;
            if indices[dim] < GRID_POINTS {
                break;
            }
            indices[dim] = 0;
        }
        if indices.iter().all(|&i| i == 0) {
            break;
        }
    }
    if !best.is_finite() {
        return Err(Error::NonInformativePoint);
    }
    if finite_max - finite_min < 1e-14 * 1.0_f64.max(finite_min.abs()) {
        return Err(Error::FlatLandscape);
    }

    // Cyclic coordinate refinement inside ±1 grid step around the incumbent.
    let mut current = best_values.clone();
    for _ in 0..64 {
        let mut moved = 0.0f64;
        for dim in 0..dims {
            let center = current[dim];
            let mut probe = current.clone();
            let (arg, val) = golden_min(center - step, center + step, |x| {
                probe[dim] = x;
                objective(&probe)
            });
            if val < best {
                moved = moved.max((arg - current[dim]).abs());
                current[dim] = arg;
                best = val;
            }
        }
        if moved < REFINE_TOL {
            break;
        }
    }

    let mut cfg = *config;
    for (&p, &v) in params.iter().zip(&current) {
        p.apply(&mut cfg, v);
    }
    let report = delta_phi(&cfg)?;
    Ok(Optimum {
        params: params.into_iter().zip(current).collect(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::InputSpec;
    use rand::prelude::*;

    fn balanced_coherent(n_alpha: f64, g: f64) -> InterferometerConfig {
        InterferometerConfig::balanced(
            g,
            InputSpec::coherent(n_alpha.sqrt(), std::f64::consts::FRAC_PI_2),
        )
    }

    fn balanced_squeezed(n_alpha: f64, g: f64, r: f64) -> InterferometerConfig {
        InterferometerConfig::balanced(
            g,
            InputSpec::squeezed_coherent(n_alpha.sqrt(), std::f64::consts::FRAC_PI_2, r, 0.0),
        )
    }

    #[test]
    fn slope_peak_value() {
        // |slope| = √(T·N_α)·cosh²g at φ + θ_α = π/2.
        let config = balanced_coherent(4.0, 1.0);
        let s = slope(&config).unwrap();
        let expected = 2.0 * 1.0f64.cosh().powi(2);
        assert!((s.analytic.abs() - expected).abs() < 1e-12);
        assert!((s.numeric.abs() - expected).abs() < 1e-5);
    }

    #[test]
    fn slope_vanishes_without_phase_offset() {
        let mut config = balanced_coherent(4.0, 1.0);
        config.input_a.alpha_phase = 0.0;
        assert_eq!(slope_analytic(&config).unwrap(), 0.0);
    }

    #[test]
    fn slope_scales_with_root_transmission() {
        let mut config = balanced_coherent(9.0, 0.8);
        let full = slope_analytic(&config).unwrap();
        config.transmission = 0.5;
        let half = slope_analytic(&config).unwrap();
        assert!((half / full - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn numeric_slope_matches_analytic_on_random_balanced_configs() {
        let mut rng = StdRng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 200 {
            let g = rng.gen_range(0.0..2.0);
            let theta1 = rng.gen_range(0.0..std::f64::consts::TAU);
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let theta_alpha = rng.gen_range(0.0..std::f64::consts::TAU);
            if (phi + theta_alpha).sin().abs() < 0.1 {
                continue; // keep away from slope zeros, where relative error is ill-posed
            }
            let config = InterferometerConfig {
                g1: g,
                g2: g,
                theta1,
                theta2: theta1 + std::f64::consts::PI,
                phi,
                transmission: rng.gen_range(0.2..1.0),
                gamma_tau: rng.gen_range(0.0..1.0),
                input_a: InputSpec::coherent(rng.gen_range(0.5..3.0), theta_alpha),
                input_b: InputSpec::vacuum(),
            };
            let s = slope(&config).unwrap();
            let scale = 1.0_f64.max(s.analytic.abs());
            assert!(
                ((s.numeric - s.analytic) / scale).abs() < 1e-6,
                "analytic {} numeric {}",
                s.analytic,
                s.numeric
            );
            checked += 1;
        }
    }

    #[test]
    fn numeric_slope_rejects_underflowing_step() {
        let config = balanced_coherent(4.0, 1.0);
        assert!(matches!(
            slope_numeric(&config, 1e-10),
            Err(Error::StepUnderflow { .. })
        ));
    }

    #[test]
    fn variance_of_balanced_lossless_pipelines() {
        let coherent = balanced_coherent(16.0, 1.0);
        let v = output_variance(&coherent).unwrap();
        assert!((v.engine - 0.25).abs() < 1e-12);
        assert!((v.closed_form - 0.25).abs() < 1e-12);

        let squeezed = balanced_squeezed(16.0, 1.0, 1.0);
        let v = output_variance(&squeezed).unwrap();
        let expected = (-2.0f64).exp() / 4.0;
        assert!((v.engine - expected).abs() < 1e-12);
        assert!((v.closed_form - expected).abs() < 1e-12);
    }

    #[test]
    fn fully_lossy_pipeline_outputs_vacuum_noise() {
        let mut config = balanced_coherent(4.0, 1.0);
        config.transmission = 0.0;
        config.g2 = 0.0;
        let v = output_variance(&config).unwrap();
        assert!((v.engine - 0.25).abs() < 1e-12);
        assert!((v.closed_form - 0.25).abs() < 1e-12);
    }

    #[test]
    fn engine_and_closed_form_agree_on_random_configs() {
        let mut rng = StdRng::seed_from_u64(32);
        for _ in 0..300 {
            let input_a = match rng.gen_range(0..3) {
                0 => InputSpec::vacuum(),
                1 => InputSpec::coherent(
                    rng.gen_range(0.0..3.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ),
                _ => InputSpec::squeezed_coherent(
                    rng.gen_range(0.0..3.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.0..1.5),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ),
            };
            let input_b = match rng.gen_range(0..3) {
                0 => InputSpec::vacuum(),
                1 => InputSpec::coherent(
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ),
                _ => InputSpec::squeezed_coherent(
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.0..1.2),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ),
            };
            let config = InterferometerConfig {
                g1: rng.gen_range(0.0..2.0),
                g2: rng.gen_range(0.0..2.0),
                theta1: rng.gen_range(0.0..std::f64::consts::TAU),
                theta2: rng.gen_range(0.0..std::f64::consts::TAU),
                phi: rng.gen_range(0.0..std::f64::consts::TAU),
                transmission: rng.gen_range(0.0..1.0),
                gamma_tau: rng.gen_range(0.0..1.5),
                input_a,
                input_b,
            };
            let v = output_variance(&config).unwrap();
            let gap = (v.engine - v.closed_form).abs()
                / 1.0_f64.max(v.engine.abs()).max(v.closed_form.abs());
            assert!(gap < 1e-10, "variance gap {gap} for {config:?}");
            let mean_gap = {
                let engine = run(&config).unwrap().output.moments(0).unwrap().mean_x;
                let closed = closed_form_mean(&config).unwrap();
                (engine - closed).abs() / 1.0_f64.max(engine.abs()).max(closed.abs())
            };
            assert!(mean_gap < 1e-10, "mean gap {mean_gap} for {config:?}");
        }
    }

    #[test]
    fn sensitivity_spot_values() {
        let report = delta_phi(&balanced_coherent(100.0, 1.0)).unwrap();
        let expected = optimal_delta_phi_coherent(100.0, 1.0);
        assert!((report.delta_phi - expected).abs() < 1e-12);
        assert!((report.delta_phi - 0.0209987).abs() < 1e-6);
        assert!(report.path_disagreement < 1e-10);

        let report_s = delta_phi(&balanced_squeezed(100.0, 1.0, 1.0)).unwrap();
        assert!((report_s.delta_phi - (-1.0f64).exp() * expected).abs() < 1e-12);
        assert!((report_s.delta_phi - 0.0077250).abs() < 1e-6);

        // Gains off: bare coherent-state interferometry.
        let report0 = delta_phi(&balanced_coherent(100.0, 0.0)).unwrap();
        assert!((report0.delta_phi - 1.0 / (2.0 * 10.0)).abs() < 1e-12);
    }

    #[test]
    fn report_fields_are_consistent() {
        let mut config = balanced_squeezed(50.0, 1.2, 0.8);
        config.phi = 0.05;
        config.transmission = 0.85;
        config.gamma_tau = 0.15;
        let report = delta_phi(&config).unwrap();
        assert_eq!(report.delta_phi, report.var_x.sqrt() / report.slope.abs());
        assert_eq!(report.sql, 1.0 / report.n_ph.sqrt());
        assert_eq!(report.hl, 1.0 / report.n_ph);
        assert_eq!(report.phi, config.phi);
        assert!(report.path_disagreement < 1e-10);
    }

    #[test]
    fn zero_transmission_is_non_informative() {
        let mut config = balanced_coherent(4.0, 1.0);
        config.transmission = 0.0;
        assert!(matches!(
            delta_phi(&config),
            Err(Error::NonInformativePoint)
        ));
    }

    #[test]
    fn limit_values() {
        let l = limits(100.0).unwrap();
        assert_eq!(l.sql, 0.1);
        assert_eq!(l.hl, 0.01);
        assert!(matches!(
            limits(0.0),
            Err(Error::NonPositiveProbeNumber { .. })
        ));
        assert!(matches!(
            limits(-3.0),
            Err(Error::NonPositiveProbeNumber { .. })
        ));
    }

    #[test]
    fn optimizer_finds_coherent_optimum() {
        let mut config = balanced_coherent(100.0, 1.0);
        config.phi = 1.0; // start away from the optimum
        let opt = optimize(&config, &[FreeParam::Phi]).unwrap();
        let expected = optimal_delta_phi_coherent(100.0, 1.0);
        assert!((opt.report.delta_phi - expected).abs() / expected < 1e-6);
        let tau = std::f64::consts::TAU;
        let wrapped = (opt.params[0].1.rem_euclid(tau)).min(tau - opt.params[0].1.rem_euclid(tau));
        assert!(wrapped < 1e-6, "argmin phi = {}", opt.params[0].1);
    }

    #[test]
    fn optimizer_matches_dense_brute_force() {
        let mut config = balanced_squeezed(25.0, 0.8, 0.7);
        config.transmission = 0.9;
        config.gamma_tau = 0.1;
        let opt = optimize(&config, &[FreeParam::Phi]).unwrap();
        let mut brute = f64::INFINITY;
        let n = 1_000_000usize;
        for k in 0..n {
            let mut cfg = config;
            cfg.phi = k as f64 / n as f64 * std::f64::consts::TAU;
            if let Ok(v) = closed_form_variance(&cfg) {
                let s = slope_analytic(&cfg).unwrap();
                if s != 0.0 {
                    brute = brute.min(v.sqrt() / s.abs());
                }
            }
        }
        assert!(
            (opt.report.delta_phi - brute).abs() / brute < 1e-6,
            "optimizer {} brute {}",
            opt.report.delta_phi,
            brute
        );
    }

    #[test]
    fn optimizer_finds_squeezed_optimum_in_two_dimensions() {
        let mut config = balanced_squeezed(100.0, 1.0, 1.0);
        config.phi = 2.0;
        config.input_a.theta_s = 4.0;
        let opt = optimize(&config, &[FreeParam::Phi, FreeParam::ThetaS]).unwrap();
        let expected = optimal_delta_phi_squeezed(100.0, 1.0, 1.0);
        assert!(
            (opt.report.delta_phi - expected).abs() / expected < 1e-6,
            "got {}, expected {expected}",
            opt.report.delta_phi
        );
    }

    #[test]
    fn loss_strictly_worsens_the_optimum() {
        let config = balanced_squeezed(50.0, 1.0, 1.0);
        let clean = optimize(&config, &[FreeParam::Phi]).unwrap();
        let mut lossy_cfg = config;
        lossy_cfg.transmission = 0.7;
        let lossy = optimize(&lossy_cfg, &[FreeParam::Phi]).unwrap();
        assert!(lossy.report.delta_phi > clean.report.delta_phi);
    }

    #[test]
    fn optimizer_rejects_degenerate_requests() {
        let config = balanced_coherent(4.0, 1.0);
        assert!(matches!(
            optimize(&config, &[]),
            Err(Error::NoFreeParameters)
        ));
        assert!(matches!(
            optimize(&config, &[FreeParam::ThetaS]),
            Err(Error::FreeParamUnavailable { .. })
        ));
        let vacuum = InterferometerConfig::balanced(1.0, InputSpec::vacuum());
        assert!(matches!(
            optimize(&vacuum, &[FreeParam::ThetaAlpha]),
            Err(Error::FreeParamUnavailable { .. })
        ));
    }

    #[test]
    fn optimizer_reports_flat_landscape() {
        // A squeezed input with r = 0 makes theta_s a spectator parameter.
        let config = balanced_squeezed(4.0, 1.0, 0.0);
        assert!(matches!(
            optimize(&config, &[FreeParam::ThetaS]),
            Err(Error::FlatLandscape)
        ));
    }

    #[test]
    fn sensitivity_monotone_in_transmission_and_dephasing() {
        // Domain note: with strong loss (T below ~tanh⁴g) and deep dephasing
        // the amplified-noise interference makes Δφ genuinely non-monotone,
        // so the guarantee is asserted where it holds.
        let base = balanced_squeezed(25.0, 1.0, 1.0);
        let n = 50;
        let mut grid = vec![vec![0.0f64; n]; n];
        for (i, row) in grid.iter_mut().enumerate() {
            let gamma_tau = 1.5 * i as f64 / (n - 1) as f64;
            for (j, cell) in row.iter_mut().enumerate() {
                let t = 0.4 + 0.6 * j as f64 / (n - 1) as f64;
                let mut config = base;
                config.transmission = t;
                config.gamma_tau = gamma_tau;
                *cell = delta_phi(&config).unwrap().delta_phi;
            }
        }
        for i in 0..n {
            for j in 1..n {
                assert!(
                    grid[i][j] <= grid[i][j - 1] + 1e-12,
                    "delta_phi increased with T at row {i}, col {j}"
                );
            }
        }
        for j in 0..n {
            for i in 1..n {
                assert!(
                    grid[i][j] >= grid[i - 1][j] - 1e-12,
                    "delta_phi decreased with gamma_tau at row {i}, col {j}"
                );
            }
        }
    }

    #[test]
    fn hl_ratio_descends_toward_the_squeezed_limit() {
        // With N_α = e^{2r}/4 the diagnostic Δφ·n_ph approaches tanh²g from
        // above as r grows; under the asymptotic probe number 2·G·N_α it
        // equals tanh²g identically.
        for g in [2.0f64, 3.0] {
            let target = g.tanh().powi(2);
            let mut gaps = Vec::new();
            for r in [2.0f64, 2.5, 3.0] {
                let n_alpha = (2.0 * r).exp() / 4.0;
                let config = balanced_squeezed(n_alpha, g, r);
                let report = delta_phi(&config).unwrap();
                gaps.push((report.delta_phi * report.n_ph - target).abs());
                let gain = 2.0 * g.sinh().powi(2);
                let asymptotic = report.delta_phi * 2.0 * gain * n_alpha;
                // Algebraically exact; the tolerance absorbs the catastrophic
                // cancellation (≈ cosh²g·cosh2r·ε / e^{−2r}) in the engine's
                // balanced-undo variance at r = 3.
                assert!(
                    (asymptotic - target).abs() < 1e-8,
                    "asymptotic ratio {asymptotic} vs tanh²g {target}"
                );
            }
            assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "gaps {gaps:?}");
        }
    }

    #[test]
    fn products_respect_exact_resource_floors() {
        // Exact minima of Δφ·n_ph over the coherent amplitude:
        //   coherent probe:  √(G(1+G))/cosh²g   at N_α = G/(1+G)
        //   squeezed probe:  ≥ (1−e^{−2r})·tanh²g  for every N_α
        let mut rng = StdRng::seed_from_u64(33);
        for _ in 0..300 {
            let g = rng.gen_range(0.1f64..2.5);
            let n_alpha = rng.gen_range(0.05..5000.0);
            let gain = 2.0 * g.sinh().powi(2);
            let coherent = delta_phi(&balanced_coherent(n_alpha, g)).unwrap();
            let floor_c = (gain * (1.0 + gain)).sqrt() / g.cosh().powi(2);
            assert!(coherent.delta_phi * coherent.n_ph >= floor_c - 1e-12);

            let r = rng.gen_range(0.05..3.0);
            let squeezed = delta_phi(&balanced_squeezed(n_alpha, g, r)).unwrap();
            let floor_s = (1.0 - (-2.0 * r).exp()) * g.tanh().powi(2);
            assert!(
                squeezed.delta_phi * squeezed.n_ph >= floor_s * (1.0 - 1e-9) - 1e-12,
                "product {} floor {floor_s}",
                squeezed.delta_phi * squeezed.n_ph
            );
        }
    }

    #[test]
    fn report_serializes_round_trip() {
        let report = delta_phi(&balanced_coherent(100.0, 1.0)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: SensitivityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }
}
