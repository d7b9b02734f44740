use nalgebra::DMatrix;

use crate::embedding::{sequential_ids, EmbeddingMatrix};
use crate::error::{Error, Result};

/// `(2D)^{1/4} √ε`, the worst-case Procrustes distance for Gram
/// discrepancy `ε` in dimension `D`.
pub fn theorem1_bound(dims: usize, epsilon: f64) -> f64 {
    (2.0 * dims as f64).powf(0.25) * epsilon.sqrt()
}

/// A pair `(X, Y)` with `‖XᵀX − YᵀY‖_F = ε` whose Procrustes distance
/// equals [`theorem1_bound`].
///
/// `N = 2D` items; with `a = √(ε / (2√(2D)))`, items `2i` and `2i + 1`
/// (0-based) are both `a·eᵢ` in `X`, and `a·eᵢ` and `−a·eᵢ` in `Y`. Then
/// `Y·Xᵀ = 0`, so every orthogonal map is optimal and attains the bound.
pub fn tightness_example(dims: usize, epsilon: f64) -> Result<(EmbeddingMatrix, EmbeddingMatrix)> {
    if dims == 0 {
        return Err(Error::InvalidArgument("dims must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    let n = 2 * dims;
    let a = (epsilon / (2.0 * (2.0 * dims as f64).sqrt())).sqrt();
    let mut x = DMatrix::zeros(dims, n);
    let mut y = DMatrix::zeros(dims, n);
    for i in 0..dims {
        x[(i, 2 * i)] = a;
        x[(i, 2 * i + 1)] = a;
        y[(i, 2 * i)] = a;
        y[(i, 2 * i + 1)] = -a;
    }
    let ids = sequential_ids(n);
    Ok((EmbeddingMatrix::new(x, ids.clone())?, EmbeddingMatrix::new(y, ids)?))
}
