use nalgebra::DMatrix;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::orthogonality_defect;

/// Maximum `‖QᵀQ − I‖_F` accepted for an orthogonal transform.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

/// A square linear map applied column-wise to embeddings.
pub trait Transform {
    fn matrix(&self) -> &DMatrix<f64>;

    fn dims(&self) -> usize {
        self.matrix().nrows()
    }
}

/// A `D × D` orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalTransform {
    matrix: DMatrix<f64>,
}

impl OrthogonalTransform {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        check_square(&matrix)?;
        let deviation = orthogonality_defect(&matrix);
        if !(deviation <= ORTHOGONALITY_TOLERANCE) {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dims: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dims, dims),
        }
    }

    /// The inverse map `Qᵀ`.
    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

impl Transform for OrthogonalTransform {
    fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// An unconstrained `D × D` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTransform {
    matrix: DMatrix<f64>,
}

impl LinearTransform {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        check_square(&matrix)?;
        if let Some(i) = matrix.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: i % matrix.nrows(),
                column: i / matrix.nrows(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

impl Transform for LinearTransform {
    fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Either kind of transform, e.g. as loaded from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTransform {
    Orthogonal(OrthogonalTransform),
    Linear(LinearTransform),
}

impl AnyTransform {
    /// Classifies a matrix: orthogonal when it passes the orthogonality
    /// check, linear otherwise.
    pub fn classify(matrix: DMatrix<f64>) -> Result<Self> {
        check_square(&matrix)?;
        if orthogonality_defect(&matrix) <= ORTHOGONALITY_TOLERANCE {
            Ok(Self::Orthogonal(OrthogonalTransform { matrix }))
        } else {
            LinearTransform::new(matrix).map(Self::Linear)
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        matches!(self, Self::Orthogonal(_))
    }
}

impl Transform for AnyTransform {
    fn matrix(&self) -> &DMatrix<f64> {
        match self {
            Self::Orthogonal(t) => t.matrix(),
            Self::Linear(t) => t.matrix(),
        }
    }
}

impl From<OrthogonalTransform> for AnyTransform {
    fn from(t: OrthogonalTransform) -> Self {
        Self::Orthogonal(t)
    }
}

impl From<LinearTransform> for AnyTransform {
    fn from(t: LinearTransform) -> Self {
        Self::Linear(t)
    }
}

fn check_square(matrix: &DMatrix<f64>) -> Result<()> {
    if matrix.nrows() == 0 {
        return Err(Error::InvalidArgument("transform must be at least 1×1".into()));
    }
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::DimensionMismatch {
            expected: matrix.nrows(),
            found: matrix.ncols(),
        });
    }
    Ok(())
}

/// Maps every column `x` of `m` to `T·x`. Ids are preserved. An exact
/// identity returns the input unchanged (including the sign of zeros).
pub fn apply_transform<T: Transform + ?Sized>(t: &T, m: &EmbeddingMatrix) -> Result<EmbeddingMatrix> {
    if t.dims() != m.dims() {
        return Err(Error::DimensionMismatch {
            expected: t.dims(),
            found: m.dims(),
        });
    }
    let q = t.matrix();
    if q.is_identity(0.0) {
        return Ok(m.clone());
    }
    m.with_values(q * m.values())
}

/// Appends `new_dims − D` zero rows. Dot products and norms are unchanged.
pub fn zero_pad(m: &EmbeddingMatrix, new_dims: usize) -> Result<EmbeddingMatrix> {
    if new_dims < m.dims() {
        return Err(Error::InvalidArgument(format!(
            "cannot pad {}-dimensional embeddings down to {new_dims}",
            m.dims()
        )));
    }
    if new_dims == m.dims() {
        return Ok(m.clone());
    }
    let mut values = DMatrix::zeros(new_dims, m.count());
    values.rows_mut(0, m.dims()).copy_from(m.values());
    Ok(EmbeddingMatrix::from_parts_unchecked(values, m.ids().to_vec()))
}

/// Extends a transform to `new_dims` as `diag(T, I)`, the map that acts
/// on zero-padded inputs exactly as `T` acts on the originals.
pub fn pad_transform(t: &AnyTransform, new_dims: usize) -> Result<AnyTransform> {
    let dims = t.dims();
    if new_dims < dims {
        return Err(Error::InvalidArgument(format!(
            "cannot pad a {dims}-dimensional transform down to {new_dims}"
        )));
    }
    let mut m = DMatrix::identity(new_dims, new_dims);
    m.view_mut((0, 0), (dims, dims)).copy_from(t.matrix());
    Ok(match t {
        AnyTransform::Orthogonal(_) => AnyTransform::Orthogonal(OrthogonalTransform::new(m)?),
        AnyTransform::Linear(_) => AnyTransform::Linear(LinearTransform::new(m)?),
    })
}
