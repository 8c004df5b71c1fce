//! Small shared linear-algebra helpers: a complex-Hermitian minimum-eigenvalue
//! probe and a scaling-and-squaring matrix exponential.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// |a − b|, absolute below magnitude 1 and relative above, so comparisons
/// stay meaningful for both near-zero and amplified quantities.
pub(crate) fn scaled_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

/// Smallest eigenvalue of a Hermitian matrix.
///
/// The input is symmetrized as `(m + m†)/2` first so that a few ulps of drift
/// in the caller's arithmetic cannot confuse the eigensolver.
pub(crate) fn hermitian_min_eig(m: &DMatrix<Complex64>) -> f64 {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Maximum absolute column sum (the induced 1-norm).
fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|z| z.norm()).sum();
        worst = worst.max(s);
    }
    worst
}

/// Matrix exponential via scaling and squaring with a degree-13 Padé
/// approximant (Higham's method, fixed order — ample for the well-conditioned
/// generators used here).
pub(crate) fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }

    // theta_13 from Higham (2005): below this 1-norm no scaling is needed.
    const THETA_13: f64 = 5.371_920_351_148_152;
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a_scaled = a.map(|z| z / 2f64.powi(s));

    let e = pade13(&a_scaled);
    let mut result = e;
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Degree-13 Padé approximant of `exp(a)`.
fn pade13(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    const B: [f64; 14] = [
        64_764_752_532_480_000.0,
        32_382_376_266_240_000.0,
        7_771_770_303_897_600.0,
        1_187_353_796_428_800.0,
        129_060_195_264_000.0,
        10_559_470_521_600.0,
        670_442_572_800.0,
        33_522_128_640.0,
        1_323_241_920.0,
        40_840_800.0,
        960_960.0,
        16_380.0,
        182.0,
        1.0,
    ];

    let n = a.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6.scale(B[13]) + &a4.scale(B[11]) + &a2.scale(B[9]);
    let u = a * (&a6 * u_inner + &a6.scale(B[7]) + &a4.scale(B[5]) + &a2.scale(B[3]) + id.scale(B[1]));
    let v_inner = &a6.scale(B[12]) + &a4.scale(B[10]) + &a2.scale(B[8]);
    let v = &a6 * v_inner + &a6.scale(B[6]) + &a4.scale(B[4]) + &a2.scale(B[2]) + id.scale(B[0]);

    let lhs = &v - &u;
    let rhs = &v + &u;
    lhs.lu()
        .solve(&rhs)
        .expect("Pade denominator must be nonsingular for a scaled matrix")
}
