//! Matrix absolute value and the Powers–Størmer–Kittaneh check.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, symmetric_eigen, thin_svd};

/// Inputs to [`check_psk_inequality`] must be symmetric within this
/// (relative to their largest entry) and have no eigenvalue below
/// `−PSD_TOLERANCE · λ_max`.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Slack on `lhs ≤ rhs`.
pub const PSK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PskCheck {
    /// `‖A − B‖₄²` (squared Schatten 4-norm).
    pub lhs: f64,
    /// `‖A² − B²‖_F`.
    pub rhs: f64,
    pub holds: bool,
}

/// Schatten `p`-norm: the `ℓ_p` norm of the singular values.
pub fn schatten_norm(m: &DMatrix<f64>, p: f64) -> f64 {
    let sv = singular_values(m);
    if p.is_infinite() {
        return sv.first().copied().unwrap_or(0.0);
    }
    sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Evaluates `‖A − B‖₄² ≤ ‖A² − B²‖_F` for symmetric PSD `A`, `B`.
///
/// Both inputs are symmetrised before use. The Schatten norm of the
/// (symmetric) difference comes from its eigenvalues.
pub fn check_psk_inequality(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<PskCheck> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let a = validate_psd(a, "first")?;
    let b = validate_psd(b, "second")?;

    let (diff_eigs, _) = symmetric_eigen(&(&a - &b));
    let lhs = diff_eigs.iter().map(|l| l.powi(4)).sum::<f64>().sqrt();
    let rhs = (&a * &a - &b * &b).norm();
    Ok(PskCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + PSK_TOLERANCE,
    })
}

fn validate_psd(m: &DMatrix<f64>, which: &str) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::NotPsd(format!("{which} input is {}×{}", m.nrows(), m.ncols())));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotPsd(format!("{which} input has non-finite entries")));
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let asym = (m - m.transpose()).amax();
    if asym > PSD_TOLERANCE * scale {
        return Err(Error::NotPsd(format!("{which} input is not symmetric (deviation {asym:e})")));
    }
    let sym = (m + m.transpose()) * 0.5;
    let (eigs, _) = symmetric_eigen(&sym);
    let lmax = eigs.last().copied().unwrap_or(0.0).max(0.0);
    if let Some(&lmin) = eigs.first() {
        if lmin < -PSD_TOLERANCE * lmax.max(scale) {
            return Err(Error::NotPsd(format!("{which} input has eigenvalue {lmin:e}")));
        }
    }
    Ok(sym)
}

/// `|M| = (MᵀM)^{1/2}`, the `N × N` PSD square root of the Gram matrix of a
/// `D × N` matrix.
///
/// Computed as `V·Σ·Vᵀ` from the thin SVD `M = U·Σ·Vᵀ` rather than from the
/// eigenvalues of `MᵀM`: square-rooting rounding noise in near-zero
/// eigenvalues would otherwise inflate the numerical rank.
pub fn matrix_abs(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.is_empty() {
        return DMatrix::zeros(m.ncols(), m.ncols());
    }
    let (_, singular_values, v_t) = thin_svd(m);
    let mut scaled = v_t.transpose();
    for (mut col, s) in scaled.column_iter_mut().zip(singular_values.iter()) {
        col *= *s;
    }
    let abs = scaled * v_t;
    (&abs + abs.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use crate::linalg::rank;
    use crate::synth::{gaussian_matrix, random_orthogonal, stream_rng};

    #[test]
    fn equal_inputs_give_zero() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let c = check_psk_inequality(&a, &a).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert_eq!(c.rhs, 0.0);
        assert!(c.holds);
    }

    #[test]
    fn diagonal_equality_case() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.0]));
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 2.0]));
        let c = check_psk_inequality(&a, &b).unwrap();
        let expected = 4.0 * 2f64.sqrt();
        assert!((c.lhs - expected).abs() < 1e-12);
        assert!((c.rhs - expected).abs() < 1e-12);
        assert!(c.holds);
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        let indefinite = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let id = DMatrix::identity(2, 2);
        assert_eq!(check_psk_inequality(&indefinite, &id).unwrap_err().code(), "not_psd");
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert_eq!(check_psk_inequality(&id, &asym).unwrap_err().code(), "not_psd");
    }

    #[test]
    fn schatten_two_is_frobenius() {
        let mut rng = stream_rng(1, 0);
        let m = gaussian_matrix(3, 5, &mut rng);
        assert!((schatten_norm(&m, 2.0) - m.norm()).abs() < 1e-12);
        assert!(schatten_norm(&m, f64::INFINITY) <= schatten_norm(&m, 4.0) + 1e-12);
    }

    #[test]
    fn abs_of_identity_and_scalar() {
        assert!((matrix_abs(&DMatrix::identity(3, 3)) - DMatrix::identity(3, 3)).norm() < 1e-14);
        let a = matrix_abs(&DMatrix::from_element(1, 1, -3.0));
        assert!((a[(0, 0)] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn abs_squares_to_gram() {
        let mut rng = stream_rng(2, 0);
        let m = gaussian_matrix(2, 4, &mut rng);
        let a = matrix_abs(&m);
        assert!((&a * &a - m.tr_mul(&m)).norm() < 1e-9);
        assert!((a.tr_mul(&a) - m.tr_mul(&m)).norm() < 1e-8);
        assert_eq!(rank(&a), rank(&m));
    }

    #[test]
    fn abs_is_rotation_invariant() {
        let mut rng = stream_rng(3, 0);
        let m = gaussian_matrix(4, 6, &mut rng);
        let q = random_orthogonal(4, &mut rng);
        assert!((matrix_abs(&(&q * &m)) - matrix_abs(&m)).norm() < 1e-9);
    }
}
