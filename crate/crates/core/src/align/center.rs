use nalgebra::DVector;

use crate::embedding::{normalize_columns, EmbeddingMatrix};
use crate::error::{Error, Result};

/// Subtracts a fixed per-dimension mean, optionally rescaling each column
/// to unit norm afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteringTransform {
    mean: DVector<f64>,
    renormalize: bool,
}

impl CenteringTransform {
    pub fn new(mean: DVector<f64>, renormalize: bool) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::InvalidArgument("mean must have at least one entry".into()));
        }
        if let Some(row) = mean.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, column: 0 });
        }
        Ok(Self { mean, renormalize })
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn renormalize(&self) -> bool {
        self.renormalize
    }

    pub fn dims(&self) -> usize {
        self.mean.len()
    }
}

/// Output of [`apply_centering`].
#[derive(Debug, Clone, PartialEq)]
pub struct Centered {
    pub matrix: EmbeddingMatrix,
    /// Columns that were exactly zero after centering and were therefore
    /// left unnormalized. Always 0 when renormalization is off.
    pub zero_columns: usize,
}

/// Per-dimension empirical mean of the columns of `m`.
pub fn fit_centering(m: &EmbeddingMatrix, renormalize: bool) -> Result<CenteringTransform> {
    if m.count() == 0 {
        return Err(Error::InvalidArgument("cannot fit centering on zero items".into()));
    }
    let mean = m.values().column_mean();
    CenteringTransform::new(mean, renormalize)
}

/// `x ↦ x − μ`, then `x ↦ x / ‖x‖` for nonzero columns when requested.
///
/// The transform is not idempotent: applying it twice shifts the mean to `−μ`.
pub fn apply_centering(c: &CenteringTransform, m: &EmbeddingMatrix) -> Result<Centered> {
    if c.dims() != m.dims() {
        return Err(Error::DimensionMismatch {
            expected: c.dims(),
            found: m.dims(),
        });
    }
    let mut values = m.values().clone();
    for mut col in values.column_iter_mut() {
        col -= &c.mean;
    }
    let zero_columns = if c.renormalize {
        normalize_columns(&mut values)
    } else {
        0
    };
    Ok(Centered {
        matrix: m.with_values(values)?,
        zero_columns,
    })
}
