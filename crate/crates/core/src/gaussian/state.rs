//! Gaussian states over an ordered quadrature basis (X₁, P₁, X₂, P₂, …).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian_min_eig;

/// Vacuum variance of a single quadrature in this convention.
pub const VACUUM_VAR: f64 = 0.25;

/// First and (symmetrized) second moments of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// Symmetrized cross term `⟨{X,P}⟩/2 − ⟨X⟩⟨P⟩`.
    pub cov_xp: f64,
}

/// A Gaussian state: mean quadrature vector plus symmetrized covariance.
///
/// Covariances are defined with the symmetric ordering
/// `cov(A,B) = ⟨{A,B}⟩/2 − ⟨A⟩⟨B⟩`; the antisymmetric part of operator
/// products lives in the commutation form [`symplectic_form`] instead and
/// never enters these matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

/// Commutation form Ω with per-mode blocks [[0, 1], [−1, 0]], normalized so
/// that `[r_i, r_j] = (i/2) Ω_ij`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

impl GaussianState {
    /// Multimode vacuum: zero mean, covariance I/4.
    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            mean: DVector::zeros(2 * modes),
            cov: DMatrix::identity(2 * modes, 2 * modes) * VACUUM_VAR,
        }
    }

    /// Builds a state from raw moments. The covariance is symmetrized.
    pub fn from_moments(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if cov.nrows() != n || cov.ncols() != n || n % 2 != 0 {
            return Err(Error::ModeCountMismatch {
                expected: n / 2,
                actual: cov.nrows() / 2,
            });
        }
        for v in mean.iter().chain(cov.iter()) {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    name: "state moment",
                    value: *v,
                });
            }
        }
        let sym = (&cov + cov.transpose()) * 0.5;
        Ok(GaussianState { mean, cov: sym })
    }

    pub fn mode_count(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Tensor product: `self ⊗ other`, modes of `other` appended after ours.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let n1 = self.mean.len();
        let n2 = other.mean.len();
        let mut mean = DVector::zeros(n1 + n2);
        mean.rows_mut(0, n1).copy_from(&self.mean);
        mean.rows_mut(n1, n2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(n1 + n2, n1 + n2);
        cov.view_mut((0, 0), (n1, n1)).copy_from(&self.cov);
        cov.view_mut((n1, n1), (n2, n2)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count() {
            return Err(Error::ModeIndex {
                index: mode,
                mode_count: self.mode_count(),
            });
        }
        Ok(())
    }

    /// Per-mode first and second moments.
    pub fn moments(&self, mode: usize) -> Result<ModeMoments> {
        self.check_mode(mode)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        Ok(ModeMoments {
            mean_x: self.mean[x],
            mean_p: self.mean[p],
            var_x: self.cov[(x, x)],
            var_p: self.cov[(p, p)],
            cov_xp: self.cov[(x, p)],
        })
    }

    /// Mean photon number `⟨a†a⟩ = Var X + Var P + ⟨X⟩² + ⟨P⟩² − 1/2`.
    pub fn photon_number(&self, mode: usize) -> Result<f64> {
        let m = self.moments(mode)?;
        Ok(m.var_x + m.var_p + m.mean_x * m.mean_x + m.mean_p * m.mean_p - 0.5)
    }

    /// Mean and variance of the photon number of one mode.
    ///
    /// Uses the exact Gaussian-state expression in terms of the fluctuation
    /// correlators `N = ⟨δa†δa⟩`, `M = ⟨δa δa⟩` and the displacement α:
    /// `Var n = N² + N + |M|² + |α|²(1 + 2N) + 2 Re(α*² M)`.
    pub fn number_stats(&self, mode: usize) -> Result<(f64, f64)> {
        let m = self.moments(mode)?;
        let alpha = Complex64::new(m.mean_x, m.mean_p);
        let n_fluct = m.var_x + m.var_p - 0.5;
        let m_anom = Complex64::new(m.var_x - m.var_p, 2.0 * m.cov_xp);
        let mean_n = n_fluct + alpha.norm_sqr();
        let var_n = n_fluct * n_fluct
            + n_fluct
            + m_anom.norm_sqr()
            + alpha.norm_sqr() * (1.0 + 2.0 * n_fluct)
            + 2.0 * (alpha.conj() * alpha.conj() * m_anom).re;
        Ok((mean_n, var_n))
    }

    /// Linear correlation coefficient between the X quadratures of two modes:
    /// `J = cov(X_i, X_j) / (σ_{X_i} σ_{X_j})`.
    ///
    /// Fails on degenerate (zero or negative variance) quadratures rather
    /// than returning NaN.
    pub fn lcc(&self, mode_i: usize, mode_j: usize) -> Result<f64> {
        self.check_mode(mode_i)?;
        self.check_mode(mode_j)?;
        let (xi, xj) = (2 * mode_i, 2 * mode_j);
        let (vi, vj) = (self.cov[(xi, xi)], self.cov[(xj, xj)]);
        if !(vi.is_finite() && vi > 0.0) {
            return Err(Error::DegenerateVariance { mode: mode_i });
        }
        if !(vj.is_finite() && vj > 0.0) {
            return Err(Error::DegenerateVariance { mode: mode_j });
        }
        let j = self.cov[(xi, xj)] / (vi.sqrt() * vj.sqrt());
        // Cauchy-Schwarz bounds |J| by 1 exactly; clamp the few-ulp overshoot
        // floating point can produce at perfect correlation.
        Ok(j.clamp(-1.0, 1.0))
    }

    /// Smallest eigenvalue of the physicality matrix `cov + (i/4) Ω`.
    ///
    /// Physical states satisfy `cov + (i/4)Ω ⪰ 0`; callers compare against a
    /// small negative tolerance to absorb floating-point noise.
    pub fn physicality_min_eig(&self) -> f64 {
        let n = self.mean.len();
        let omega = symplectic_form(self.mode_count());
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = Complex64::new(self.cov[(i, j)], omega[(i, j)] * 0.25);
            }
        }
        hermitian_min_eig(&h)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.physicality_min_eig() >= -tol
    }
}
