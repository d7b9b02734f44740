//! Orthogonal and unconstrained least-squares alignment.

use nalgebra::{DMatrix, DVector};

use super::transform::{LinearTransform, OrthogonalTransform};
use crate::embedding::{ensure_paired, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::linalg::{thin_svd, Svd};

/// Pseudo-inverse cutoff relative to the largest singular value of `X`.
pub const PINV_CUTOFF: f64 = 1e-12;

/// Orthogonal matrix minimising `‖Q·X − Y‖_F` for raw `D × N` matrices.
///
/// With `U·Σ·Vᵀ` the SVD of `Y·Xᵀ`, the minimiser is `U·Vᵀ`. When `Y·Xᵀ` is
/// rank deficient the minimiser is not unique; the deterministic ordering of
/// [`Svd`] fixes which one is returned.
pub fn procrustes(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = Svd::new(&(y * x.transpose()));
    &svd.u * &svd.v_t
}

/// Solves `min_Q ‖Q·X − Y‖_F` over orthogonal `Q` for paired embeddings.
pub fn solve_procrustes(source: &EmbeddingMatrix, target: &EmbeddingMatrix) -> Result<OrthogonalTransform> {
    ensure_paired(source, target)?;
    if source.count() == 0 {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    }
    OrthogonalTransform::new(procrustes(source.values(), target.values()))
}

/// Solves `min_A ‖A·X − Y‖_F² + ridge·‖A‖_F²` over all `D × D` matrices.
///
/// Uses the thin SVD `X = U·S·Vᵀ`, giving `A = Y·V·diag(s / (s² + ridge))·Uᵀ`.
/// For `ridge == 0` this is `Y·X⁺`: equal to `Y·Xᵀ·(X·Xᵀ)⁻¹` when `X` has full
/// row rank, and the minimum-Frobenius-norm minimiser otherwise (singular
/// values below `PINV_CUTOFF · σ_max` are dropped).
pub fn solve_linear(source: &EmbeddingMatrix, target: &EmbeddingMatrix, ridge: f64) -> Result<LinearTransform> {
    ensure_paired(source, target)?;
    if source.count() == 0 {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    }
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidArgument(format!("ridge must be finite and non-negative, got {ridge}")));
    }
    LinearTransform::new(least_squares_map(source.values(), target.values(), ridge))
}

pub(crate) fn least_squares_map(x: &DMatrix<f64>, y: &DMatrix<f64>, ridge: f64) -> DMatrix<f64> {
    let dims = x.nrows();
    let (u, s, v_t) = thin_svd(x);
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);

    let gains = DVector::from_iterator(
        s.len(),
        s.iter().map(|&si| {
            if ridge > 0.0 {
                si / (si * si + ridge)
            } else if smax > 0.0 && si > PINV_CUTOFF * smax {
                1.0 / si
            } else {
                0.0
            }
        }),
    );
    // Y·V·diag(g)·Uᵀ, with V = v_tᵀ of shape N × k.
    let mut yv = y * v_t.transpose();
    for (mut col, g) in yv.column_iter_mut().zip(gains.iter()) {
        col *= *g;
    }
    let a = yv * u.transpose();
    debug_assert_eq!(a.shape(), (dims, dims));
    a
}

/// `‖T·X − Y‖_F`.
pub fn residual(t: &DMatrix<f64>, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (t * x - y).norm()
}
