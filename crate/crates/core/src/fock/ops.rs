//! Operator primitives on the truncated two-mode Fock space.
//!
//! Basis states |n_a, n_b⟩ with n < d per mode are flattened to the index
//! `n_a * d + n_b`, so the total dimension is D = d². Unitaries are built by
//! projecting the generator onto the truncated space and exponentiating, so
//! each operator stays exactly unitary on the truncated space; truncation
//! error shows up as boundary-level population ("leakage"), never as lost
//! trace.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::gaussian::InputSpec;
use crate::linalg;

/// Complex sparse operator as (row, col, value) triplets, specialized for
/// two-sided conjugation ρ → UρU† of dense density matrices.
pub(crate) struct SparseOp {
    dim: usize,
    triplets: Vec<(u32, u32, Complex64)>,
}

impl SparseOp {
    /// U v, for unitarity checks and pure-state evolution.
    #[cfg(test)]
    pub(crate) fn apply_vec(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = DVector::zeros(self.dim);
        for &(i, j, u) in &self.triplets {
            out[i as usize] += u * v[j as usize];
        }
        out
    }

    /// U ρ U†, two column-oriented sparse passes.
    pub(crate) fn conjugate(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let d = self.dim;
        assert_eq!(rho.nrows(), d);
        assert_eq!(rho.ncols(), d);
        let mut mid = DMatrix::<Complex64>::zeros(d, d);
        {
            // mid = U ρ, built one (contiguous) column at a time.
            let rs = rho.as_slice();
            let ms = mid.as_mut_slice();
            for c in 0..d {
                let rcol = &rs[c * d..(c + 1) * d];
                let mcol = &mut ms[c * d..(c + 1) * d];
                for &(i, j, u) in &self.triplets {
                    mcol[i as usize] += u * rcol[j as usize];
                }
            }
        }
        // out = mid U†: column i of the result accumulates conj(U[i,j])·mid[:,j].
        let mut out = DMatrix::<Complex64>::zeros(d, d);
        let ms = mid.as_slice();
        let os = out.as_mut_slice();
        for &(i, j, u) in &self.triplets {
            let w = u.conj();
            let src = &ms[(j as usize) * d..(j as usize + 1) * d];
            let dst = &mut os[(i as usize) * d..(i as usize + 1) * d];
            for r in 0..d {
                dst[r] += w * src[r];
            }
        }
        out
    }
}

/// Two-mode squeezer exp(ζ â†b̂† − ζ* âb̂), ζ = g e^{iθ}, on the truncated
/// space. The generator conserves n_a − n_b, so it is exponentiated per
/// photon-number-difference sector (an anti-Hermitian tridiagonal block),
/// which keeps every sector exactly unitary.
pub(crate) fn tms_unitary(d: usize, g: f64, theta: f64) -> SparseOp {
    let zeta = Complex64::from_polar(g, theta);
    let mut triplets = Vec::new();
    let dim = d * d;
    for q in -(d as isize - 1)..=(d as isize - 1) {
        let na0 = q.max(0) as usize;
        let nb0 = (-q).max(0) as usize;
        let len = d - na0.max(nb0);
        let flat = |k: usize| ((na0 + k) * d + (nb0 + k)) as u32;
        if len == 1 || g == 0.0 {
            for k in 0..len {
                triplets.push((flat(k), flat(k), Complex64::new(1.0, 0.0)));
            }
            continue;
        }
        let mut gen = DMatrix::<Complex64>::zeros(len, len);
        for k in 0..len - 1 {
            let amp = zeta * (((na0 + k + 1) * (nb0 + k + 1)) as f64).sqrt();
            gen[(k + 1, k)] = amp;
            gen[(k, k + 1)] = -amp.conj();
        }
        let block = linalg::expm(&gen);
        for col in 0..len {
            for row in 0..len {
                let u = block[(row, col)];
                if u != Complex64::new(0.0, 0.0) {
                    triplets.push((flat(row), flat(col), u));
                }
            }
        }
    }
    SparseOp { dim, triplets }
}

/// √(C(n,k) T^{n−k} (1−T)^k) for k photons lost out of n: the coefficient
/// table of the photon-loss Kraus operators, `table[k][n]`.
fn loss_coefficients(d: usize, transmission: f64) -> Vec<Vec<f64>> {
    let reflectivity = 1.0 - transmission;
    let mut table = vec![vec![0.0; d]; d];
    for n in 0..d {
        // binom(n, k) by the multiplicative recurrence.
        let mut binom = 1.0f64;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
            }
            let w = binom * transmission.powi((n - k) as i32) * reflectivity.powi(k as i32);
            table[k][n] = w.sqrt();
        }
    }
    table
}

/// Photon loss of transmission T on one mode (0 = first, 1 = second),
/// applied as the full Kraus sum. T = 1 reproduces ρ exactly.
pub(crate) fn apply_loss(
    rho: &DMatrix<Complex64>,
    d: usize,
    transmission: f64,
    mode: usize,
) -> DMatrix<Complex64> {
    let table = loss_coefficients(d, transmission);
    let dim = d * d;
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for (k, coeff) in table.iter().enumerate() {
        if coeff.iter().all(|&c| c == 0.0) {
            continue;
        }
        for m in k..d {
            for n in k..d {
                let w = Complex64::new(coeff[n] * coeff[m], 0.0);
                if w.re == 0.0 {
                    continue;
                }
                match mode {
                    0 => {
                        // |n, ·⟩⟨m, ·| → w |n−k, ·⟩⟨m−k, ·|
                        for mb in 0..d {
                            let src_c = m * d + mb;
                            let dst_c = (m - k) * d + mb;
                            for nb in 0..d {
                                out[((n - k) * d + nb, dst_c)] += w * rho[(n * d + nb, src_c)];
                            }
                        }
                    }
                    1 => {
                        // |·, n⟩⟨·, m| → w |·, n−k⟩⟨·, m−k|
                        for ma in 0..d {
                            let src_c = ma * d + m;
                            let dst_c = ma * d + (m - k);
                            for na in 0..d {
                                out[(na * d + (n - k), dst_c)] += w * rho[(na * d + n, src_c)];
                            }
                        }
                    }
                    _ => unreachable!("loss acts on mode 0 or 1"),
                }
            }
        }
    }
    out
}

/// Phase shift e^{iφ n̂_a} ρ e^{−iφ n̂_a} on the first mode, in place.
pub(crate) fn apply_phase_mode_a(rho: &mut DMatrix<Complex64>, d: usize, phi: f64) {
    let phases: Vec<Complex64> = (0..d)
        .map(|n| Complex64::from_polar(1.0, phi * n as f64))
        .collect();
    let dim = d * d;
    for col in 0..dim {
        let pc = phases[col / d].conj();
        for row in 0..dim {
            rho[(row, col)] *= phases[row / d] * pc;
        }
    }
}

/// Single-mode input |ψ⟩ = D(α) S(ζ) |0⟩ on the truncated space, with
/// both operators exponentiated from their projected generators.
pub(crate) fn prepare_mode(d: usize, spec: &InputSpec) -> DVector<Complex64> {
    let mut psi = DVector::<Complex64>::zeros(d);
    psi[0] = Complex64::new(1.0, 0.0);
    if spec.r > 0.0 {
        // S(ζ) = exp[(ζ* â² − ζ â†²)/2], ζ = r e^{iθ_s}
        let zeta = Complex64::from_polar(spec.r, spec.theta_s);
        let mut gen = DMatrix::<Complex64>::zeros(d, d);
        for n in 2..d {
            let amp = 0.5 * ((n * (n - 1)) as f64).sqrt();
            gen[(n - 2, n)] += zeta.conj() * amp;
            gen[(n, n - 2)] -= zeta * amp;
        }
        psi = linalg::expm(&gen) * psi;
    }
    if spec.alpha_mag > 0.0 {
        // D(α) = exp(α â† − α* â)
        let alpha = Complex64::from_polar(spec.alpha_mag, spec.alpha_phase);
        let mut gen = DMatrix::<Complex64>::zeros(d, d);
        for n in 0..d - 1 {
            let amp = ((n + 1) as f64).sqrt();
            gen[(n + 1, n)] += alpha * amp;
            gen[(n, n + 1)] -= alpha.conj() * amp;
        }
        psi = linalg::expm(&gen) * psi;
    }
    psi
}
