//! Paired embedding matrices.
//!
//! An [`EmbeddingMatrix`] stores `N` embeddings of dimension `D` as the
//! columns of a `D × N` matrix, together with one identifier per column.
//! Column order is the pairing order: column `i` of a source matrix and
//! column `i` of a target matrix describe the same item.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVectorView};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    values: DMatrix<f64>,
    ids: Vec<String>,
}

impl EmbeddingMatrix {
    /// Validates and wraps a `D × N` matrix with its `N` item ids.
    ///
    /// Rejects `D == 0`, non-finite values, an id list of the wrong length,
    /// and repeated ids.
    pub fn new(values: DMatrix<f64>, ids: Vec<String>) -> Result<Self> {
        if values.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "embedding dimension must be at least 1".into(),
            ));
        }
        if ids.len() != values.ncols() {
            return Err(Error::IdCountMismatch {
                ids: ids.len(),
                columns: values.ncols(),
            });
        }
        check_finite(&values)?;
        check_unique(&ids)?;
        Ok(Self { values, ids })
    }

    /// Builds a matrix from column vectors given as slices.
    pub fn from_columns<S: AsRef<str>>(ids: &[S], columns: &[Vec<f64>]) -> Result<Self> {
        let dims = columns.first().map(Vec::len).unwrap_or(0);
        if let Some(bad) = columns.iter().find(|c| c.len() != dims) {
            return Err(Error::DimensionMismatch {
                expected: dims,
                found: bad.len(),
            });
        }
        let values = DMatrix::from_fn(dims, columns.len(), |r, c| columns[c][r]);
        Self::new(values, ids.iter().map(|s| s.as_ref().to_owned()).collect())
    }

    /// Same as [`EmbeddingMatrix::new`] with ids `"0"`, `"1"`, ... zero-padded
    /// to a common width so that lexicographic and column order agree.
    pub fn with_sequential_ids(values: DMatrix<f64>) -> Result<Self> {
        let ids = sequential_ids(values.ncols());
        Self::new(values, ids)
    }

    /// Swaps in new values of any dimension, keeping the ids.
    pub(crate) fn with_values(&self, values: DMatrix<f64>) -> Result<Self> {
        debug_assert_eq!(values.ncols(), self.ids.len());
        if values.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "embedding dimension must be at least 1".into(),
            ));
        }
        check_finite(&values)?;
        Ok(Self {
            values,
            ids: self.ids.clone(),
        })
    }

    pub(crate) fn from_parts_unchecked(values: DMatrix<f64>, ids: Vec<String>) -> Self {
        Self { values, ids }
    }

    pub fn dims(&self) -> usize {
        self.values.nrows()
    }

    pub fn count(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn column(&self, i: usize) -> DVectorView<'_, f64> {
        self.values.column(i)
    }

    pub fn into_parts(self) -> (DMatrix<f64>, Vec<String>) {
        (self.values, self.ids)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select(&self, columns: &[usize]) -> Self {
        let values = self.values.select_columns(columns.iter());
        let ids = columns.iter().map(|&c| self.ids[c].clone()).collect();
        Self { values, ids }
    }

    /// Scales every nonzero column to unit Euclidean norm. Returns the new
    /// matrix and the number of zero columns left untouched.
    pub fn normalized(&self) -> (Self, usize) {
        let mut values = self.values.clone();
        let zeros = normalize_columns(&mut values);
        (
            Self {
                values,
                ids: self.ids.clone(),
            },
            zeros,
        )
    }

    /// True when every column has unit norm within `tol`.
    pub fn has_unit_columns(&self, tol: f64) -> bool {
        self.values
            .column_iter()
            .all(|c| (c.norm() - 1.0).abs() <= tol)
    }
}

pub(crate) fn normalize_columns(values: &mut DMatrix<f64>) -> usize {
    let mut zeros = 0;
    for mut col in values.column_iter_mut() {
        let norm = col.norm();
        if norm == 0.0 {
            zeros += 1;
        } else {
            col /= norm;
        }
    }
    zeros
}

pub(crate) fn sequential_ids(count: usize) -> Vec<String> {
    let width = count.saturating_sub(1).to_string().len();
    (0..count).map(|i| format!("{i:0width$}")).collect()
}

fn check_finite(values: &DMatrix<f64>) -> Result<()> {
    for (column, col) in values.column_iter().enumerate() {
        if let Some(row) = col.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, column });
        }
    }
    Ok(())
}

fn check_unique(ids: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(())
}

/// Checks that two matrices share dimension and id sequence.
pub(crate) fn ensure_paired(a: &EmbeddingMatrix, b: &EmbeddingMatrix) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected: a.dims(),
            found: b.dims(),
        });
    }
    ensure_same_ids(a, b)
}

pub(crate) fn ensure_same_ids(a: &EmbeddingMatrix, b: &EmbeddingMatrix) -> Result<()> {
    if a.count() != b.count() {
        return Err(Error::CountMismatch {
            expected: a.count(),
            found: b.count(),
        });
    }
    if let Some(position) = a.ids.iter().zip(&b.ids).position(|(x, y)| x != y) {
        return Err(Error::IdOrderMismatch { position });
    }
    Ok(())
}
