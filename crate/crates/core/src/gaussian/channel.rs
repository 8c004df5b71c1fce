//! Gaussian channels and the elementary operations of the interferometer:
//! two-mode squeezing, phase shift, photon loss and collisional dephasing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::state::{symplectic_form, GaussianState};
use crate::linalg::hermitian_min_eig;

/// A (deterministic) Gaussian channel acting on `k` modes:
/// `mean → X mean + d`, `cov → X cov Xᵀ + Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
    d: DVector<f64>,
}

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

impl GaussianChannel {
    pub fn identity(modes: usize) -> Self {
        let n = 2 * modes;
        GaussianChannel {
            x: DMatrix::identity(n, n),
            y: DMatrix::zeros(n, n),
            d: DVector::zeros(n),
        }
    }

    /// Two-mode squeezer realizing the Bogoliubov transform
    /// `a → cosh(g)·a + e^{iθ} sinh(g)·b†`, `b → cosh(g)·b + e^{iθ} sinh(g)·a†`.
    ///
    /// Symplectic (unitary) for every finite `g`, `θ`.
    pub fn two_mode_squeezer(g: f64, theta: f64) -> Result<Self> {
        require_finite("g", g)?;
        require_finite("theta", theta)?;
        let u = g.cosh();
        let vr = g.sinh() * theta.cos();
        let vi = g.sinh() * theta.sin();
        let x = DMatrix::from_row_slice(
            4,
            4,
            &[
                u, 0.0, vr, vi, //
                0.0, u, vi, -vr, //
                vr, vi, u, 0.0, //
                vi, -vr, 0.0, u,
            ],
        );
        Ok(GaussianChannel {
            x,
            y: DMatrix::zeros(4, 4),
            d: DVector::zeros(4),
        })
    }

    /// Single-mode phase shift `a → e^{iφ} a`:
    /// `X → cos(φ)X − sin(φ)P`, `P → sin(φ)X + cos(φ)P`.
    pub fn phase_shift(phi: f64) -> Result<Self> {
        require_finite("phi", phi)?;
        let (s, c) = phi.sin_cos();
        let x = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        Ok(GaussianChannel {
            x,
            y: DMatrix::zeros(2, 2),
            d: DVector::zeros(2),
        })
    }

    /// Pure-loss channel with power transmission `T ∈ [0, 1]`:
    /// `X = √T·I`, `Y = ((1−T)/4)·I` (vacuum environment).
    pub fn loss(transmission: f64) -> Result<Self> {
        require_finite("T", transmission)?;
        if !(0.0..=1.0).contains(&transmission) {
            return Err(Error::InvalidParameter {
                name: "T",
                value: transmission,
                constraint: "0 <= T <= 1",
            });
        }
        let x = DMatrix::identity(2, 2) * transmission.sqrt();
        let y = DMatrix::identity(2, 2) * ((1.0 - transmission) / 4.0);
        Ok(GaussianChannel {
            x,
            y,
            d: DVector::zeros(2),
        })
    }

    /// Collisional dephasing of the atomic mode over an interrogation window,
    /// `b → e^{−Γτ} b + F̂` with a vacuum-correlated Langevin noise operator
    /// (`⟨F̂F̂†⟩ = 1 − e^{−2Γτ}`, `⟨F̂†F̂⟩ = 0`).
    ///
    /// Identical to [`GaussianChannel::loss`] with `T = e^{−2Γτ}`.
    pub fn dephase(gamma_tau: f64) -> Result<Self> {
        require_finite("gamma_tau", gamma_tau)?;
        if gamma_tau < 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma_tau",
                value: gamma_tau,
                constraint: "gamma_tau >= 0",
            });
        }
        let eta = (-gamma_tau).exp();
        let t_eff = (-2.0 * gamma_tau).exp();
        let x = DMatrix::identity(2, 2) * eta;
        let y = DMatrix::identity(2, 2) * ((1.0 - t_eff) / 4.0);
        Ok(GaussianChannel {
            x,
            y,
            d: DVector::zeros(2),
        })
    }

    /// Number of modes this channel acts on.
    pub fn mode_count(&self) -> usize {
        self.x.nrows() / 2
    }

    pub fn x_matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y_matrix(&self) -> &DMatrix<f64> {
        &self.y
    }

    /// Applies the channel to the listed modes of `state` (identity elsewhere).
    ///
    /// `modes.len()` must equal the channel's mode count and indices must be
    /// distinct and in range.
    pub fn apply(&self, state: &GaussianState, modes: &[usize]) -> Result<GaussianState> {
        let k = self.mode_count();
        if modes.len() != k {
            return Err(Error::ModeCountMismatch {
                expected: k,
                actual: modes.len(),
            });
        }
        let m = state.mode_count();
        for (i, &mode) in modes.iter().enumerate() {
            if mode >= m {
                return Err(Error::ModeIndex {
                    index: mode,
                    mode_count: m,
                });
            }
            if modes[..i].contains(&mode) {
                return Err(Error::DuplicateMode { index: mode });
            }
        }

        let n = 2 * m;
        let mut x_full = DMatrix::identity(n, n);
        let mut y_full = DMatrix::zeros(n, n);
        let mut d_full = DVector::zeros(n);
        for (bi, &mi) in modes.iter().enumerate() {
            d_full[2 * mi] = self.d[2 * bi];
            d_full[2 * mi + 1] = self.d[2 * bi + 1];
            for (bj, &mj) in modes.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        x_full[(2 * mi + a, 2 * mj + b)] = self.x[(2 * bi + a, 2 * bj + b)];
                        y_full[(2 * mi + a, 2 * mj + b)] = self.y[(2 * bi + a, 2 * bj + b)];
                    }
                }
            }
        }

        let mean = &x_full * state.mean() + d_full;
        let cov = &x_full * state.cov() * x_full.transpose() + y_full;
        GaussianState::from_moments(mean, cov)
    }

    /// Largest entry of `X Ω Xᵀ − Ω`; zero (to rounding) iff `X` is symplectic.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.mode_count());
        (&self.x * &omega * self.x.transpose() - omega)
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the complete-positivity matrix
    /// `Y + (i/4)(Ω − X Ω Xᵀ)`; admissible channels have it ≥ 0 up to noise.
    pub fn cp_min_eig(&self) -> f64 {
        let n = self.x.nrows();
        let omega = symplectic_form(self.mode_count());
        let defect = &omega - &self.x * &omega * self.x.transpose();
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = Complex64::new(self.y[(i, j)], 0.25 * defect[(i, j)]);
            }
        }
        hermitian_min_eig(&h)
    }

    /// True when the channel is a unitary Gaussian operation: no added noise
    /// and a symplectic linear part.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let y_norm = self.y.iter().map(|v| v.abs()).fold(0.0, f64::max);
        y_norm <= tol && self.symplectic_defect() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::state::VACUUM_VAR;
    use rand::prelude::*;

    const TOL: f64 = 1e-12;

    fn max_abs_diff(a: &GaussianState, b: &GaussianState) -> f64 {
        let dm = (a.mean() - b.mean()).iter().map(|v| v.abs()).fold(0.0, f64::max);
        let dc = (a.cov() - b.cov()).iter().map(|v| v.abs()).fold(0.0, f64::max);
        dm.max(dc)
    }

    #[test]
    fn squeezer_is_symplectic_and_noiseless() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let g = rng.gen_range(0.0..3.0);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let ch = GaussianChannel::two_mode_squeezer(g, theta).unwrap();
            assert!(ch.symplectic_defect() <= TOL, "g={g} theta={theta}");
            assert!(ch.is_unitary(TOL));
        }
    }

    #[test]
    fn phase_shift_is_symplectic() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..1000 {
            let phi = rng.gen_range(-10.0..10.0);
            let ch = GaussianChannel::phase_shift(phi).unwrap();
            assert!(ch.symplectic_defect() <= TOL);
        }
    }

    #[test]
    fn squeezer_at_zero_gain_is_identity() {
        let ch = GaussianChannel::two_mode_squeezer(0.0, 1.3).unwrap();
        let s = GaussianState::vacuum(2);
        let out = ch.apply(&s, &[0, 1]).unwrap();
        assert!(max_abs_diff(&s, &out) < TOL);
    }

    #[test]
    fn squeezer_undone_by_opposite_phase() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..200 {
            let g = rng.gen_range(0.0..2.0);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let fwd = GaussianChannel::two_mode_squeezer(g, theta).unwrap();
            let bwd =
                GaussianChannel::two_mode_squeezer(g, theta + std::f64::consts::PI).unwrap();
            let mut s = GaussianState::vacuum(2);
            s = fwd.apply(&s, &[0, 1]).unwrap();
            s = bwd.apply(&s, &[0, 1]).unwrap();
            assert!(max_abs_diff(&s, &GaussianState::vacuum(2)) < TOL);
        }
    }

    #[test]
    fn squeezed_vacuum_photon_number_and_variance() {
        // Each output mode of a two-mode squeezed vacuum holds sinh²g photons
        // with isotropic quadrature variance cosh(2g)/4.
        let g = 1.0;
        let ch = GaussianChannel::two_mode_squeezer(g, 0.0).unwrap();
        let out = ch.apply(&GaussianState::vacuum(2), &[0, 1]).unwrap();
        let m = out.moments(0).unwrap();
        assert!((m.var_x - (2.0 * g).cosh() / 4.0).abs() < TOL);
        assert!((m.var_p - (2.0 * g).cosh() / 4.0).abs() < TOL);
        for mode in 0..2 {
            let n = out.photon_number(mode).unwrap();
            assert!((n - g.sinh().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn tmsv_photon_number_across_gain_range() {
        for i in 0..=30 {
            let g = i as f64 * 0.1;
            let ch = GaussianChannel::two_mode_squeezer(g, 0.4).unwrap();
            let out = ch.apply(&GaussianState::vacuum(2), &[0, 1]).unwrap();
            assert!(
                (out.photon_number(0).unwrap() - g.sinh().powi(2)).abs() < 1e-10,
                "g = {g}"
            );
        }
    }

    #[test]
    fn phase_shift_rotates_mean() {
        let mut s = GaussianState::vacuum(1);
        s.mean_mut_for_test(0, 2.0); // ⟨X⟩ = 2, ⟨P⟩ = 0
        let ch = GaussianChannel::phase_shift(std::f64::consts::FRAC_PI_2).unwrap();
        let out = ch.apply(&s, &[0]).unwrap();
        assert!(out.mean()[0].abs() < TOL);
        assert!((out.mean()[1] - 2.0).abs() < TOL);
    }

    #[test]
    fn loss_on_coherent_state() {
        // T = 0.5 on |α| = 2 along X: mean → √2, photon number → 2, vacuum
        // variance is preserved.
        let mut s = GaussianState::vacuum(1);
        s.mean_mut_for_test(0, 2.0);
        let ch = GaussianChannel::loss(0.5).unwrap();
        let out = ch.apply(&s, &[0]).unwrap();
        assert!((out.mean()[0] - 2.0f64.sqrt()).abs() < TOL);
        assert!((out.moments(0).unwrap().var_x - VACUUM_VAR).abs() < TOL);
        assert!((out.photon_number(0).unwrap() - 2.0).abs() < TOL);
    }

    #[test]
    fn loss_semigroup_composes() {
        // loss(T1) ∘ loss(T2) = loss(T1·T2) on arbitrary Gaussian states.
        let sq = GaussianChannel::two_mode_squeezer(0.8, 0.3).unwrap();
        let probe = sq.apply(&GaussianState::vacuum(2), &[0, 1]).unwrap();
        let a = GaussianChannel::loss(0.7)
            .unwrap()
            .apply(
                &GaussianChannel::loss(0.6).unwrap().apply(&probe, &[0]).unwrap(),
                &[0],
            )
            .unwrap();
        let b = GaussianChannel::loss(0.42).unwrap().apply(&probe, &[0]).unwrap();
        assert!(max_abs_diff(&a, &b) < TOL);
    }

    #[test]
    fn loss_extremes() {
        let mut s = GaussianState::vacuum(1);
        s.mean_mut_for_test(0, 1.5);
        let keep = GaussianChannel::loss(1.0).unwrap().apply(&s, &[0]).unwrap();
        assert!(max_abs_diff(&keep, &s) < TOL);
        let kill = GaussianChannel::loss(0.0).unwrap().apply(&s, &[0]).unwrap();
        assert!(max_abs_diff(&kill, &GaussianState::vacuum(1)) < TOL);
    }

    #[test]
    fn dephase_equals_loss_at_effective_transmission() {
        // Γτ attenuation with vacuum-correlated Langevin noise is exactly a
        // loss channel at T = e^{−2Γτ}.
        for i in 0..50 {
            let gamma_tau = i as f64 * 0.1;
            let de = GaussianChannel::dephase(gamma_tau).unwrap();
            let lo = GaussianChannel::loss((-2.0 * gamma_tau).exp()).unwrap();
            let dx = (&de.x - &lo.x).iter().map(|v| v.abs()).fold(0.0, f64::max);
            let dy = (&de.y - &lo.y).iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert!(dx <= 1e-15 && dy <= 1e-15, "gamma_tau = {gamma_tau}");
        }
    }

    #[test]
    fn strong_dephasing_returns_vacuum() {
        let sq = GaussianChannel::two_mode_squeezer(1.0, 0.0).unwrap();
        let s = sq.apply(&GaussianState::vacuum(2), &[0, 1]).unwrap();
        let out = GaussianChannel::dephase(1e3).unwrap().apply(&s, &[1]).unwrap();
        let m = out.moments(1).unwrap();
        assert!((m.var_x - VACUUM_VAR).abs() < 1e-12);
        assert!(out.photon_number(1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn loss_and_dephase_are_completely_positive() {
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            assert!(GaussianChannel::loss(t).unwrap().cp_min_eig() >= -1e-10);
            let gt = i as f64 * 0.15;
            assert!(GaussianChannel::dephase(gt).unwrap().cp_min_eig() >= -1e-10);
        }
    }

    #[test]
    fn loss_then_phase_commutes_with_phase_then_loss() {
        // The loss environment is isotropic, so the optical loss and the
        // phase shift commute; the pipeline applies loss first by convention.
        let sq = GaussianChannel::two_mode_squeezer(1.2, 0.9).unwrap();
        let probe = sq.apply(&GaussianState::vacuum(2), &[0, 1]).unwrap();
        let loss = GaussianChannel::loss(0.6).unwrap();
        let phase = GaussianChannel::phase_shift(0.77).unwrap();
        let a = phase
            .apply(&loss.apply(&probe, &[0]).unwrap(), &[0])
            .unwrap();
        let b = loss
            .apply(&phase.apply(&probe, &[0]).unwrap(), &[0])
            .unwrap();
        assert!(max_abs_diff(&a, &b) < TOL);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            GaussianChannel::loss(1.5),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            GaussianChannel::loss(f64::NAN),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            GaussianChannel::dephase(-0.1),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            GaussianChannel::two_mode_squeezer(f64::INFINITY, 0.0),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn apply_validates_mode_lists() {
        let ch = GaussianChannel::two_mode_squeezer(0.5, 0.0).unwrap();
        let s = GaussianState::vacuum(2);
        assert!(matches!(
            ch.apply(&s, &[0]),
            Err(Error::ModeCountMismatch { .. })
        ));
        assert!(matches!(
            ch.apply(&s, &[0, 0]),
            Err(Error::DuplicateMode { .. })
        ));
        assert!(matches!(
            ch.apply(&s, &[0, 2]),
            Err(Error::ModeIndex { .. })
        ));
    }

    #[test]
    fn pipeline_states_stay_physical() {
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..100 {
            let mut s = GaussianState::vacuum(2);
            let g = rng.gen_range(0.0..1.5);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            s = GaussianChannel::two_mode_squeezer(g, theta)
                .unwrap()
                .apply(&s, &[0, 1])
                .unwrap();
            s = GaussianChannel::loss(rng.gen_range(0.0..1.0))
                .unwrap()
                .apply(&s, &[0])
                .unwrap();
            s = GaussianChannel::dephase(rng.gen_range(0.0..1.0))
                .unwrap()
                .apply(&s, &[1])
                .unwrap();
            assert!(s.is_physical(1e-10));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn squeezer_symplectic_for_all_parameters(
                g in 0.0..3.0f64,
                theta in 0.0..std::f64::consts::TAU,
            ) {
                let ch = GaussianChannel::two_mode_squeezer(g, theta).unwrap();
                prop_assert!(ch.symplectic_defect() <= 1e-12);
            }

            #[test]
            fn dephase_is_loss_in_disguise(gamma_tau in 0.0..4.0f64) {
                let de = GaussianChannel::dephase(gamma_tau).unwrap();
                let lo = GaussianChannel::loss((-2.0 * gamma_tau).exp()).unwrap();
                let dx = (de.x_matrix() - lo.x_matrix()).iter().map(|v| v.abs()).fold(0.0, f64::max);
                let dy = (de.y_matrix() - lo.y_matrix()).iter().map(|v| v.abs()).fold(0.0, f64::max);
                prop_assert!(dx <= 1e-15 && dy <= 1e-15);
            }

            #[test]
            fn lcc_is_bounded_on_squeezed_vacuum(
                g in 0.0..3.0f64,
                theta in 0.0..std::f64::consts::TAU,
            ) {
                let ch = GaussianChannel::two_mode_squeezer(g, theta).unwrap();
                let s = ch.apply(&GaussianState::vacuum(2), &[0, 1]).unwrap();
                let j = s.lcc(0, 1).unwrap();
                prop_assert!((-1.0..=1.0).contains(&j));
            }
        }
    }
}

#[cfg(test)]
impl GaussianState {
    /// Test-only helper to poke a mean entry without exposing mutability.
    fn mean_mut_for_test(&mut self, idx: usize, value: f64) {
        let mut mean = self.mean().clone();
        mean[idx] = value;
        *self = GaussianState::from_moments(mean, self.cov().clone()).unwrap();
    }
}
