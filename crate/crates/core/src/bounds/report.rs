//! Dot-product discrepancies and the alignment-error report.

use serde::Serialize;

use crate::align::procrustes;
use crate::embedding::{ensure_paired, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::linalg::{cross_gram_sq_diff, singular_values, RANK_TOLERANCE};

/// Absolute slack allowed on every bound check.
pub const CHECK_TOLERANCE: f64 = 1e-8;

/// Columns count as unit norm when `|‖x‖ − 1|` is at most this.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-8;

/// `‖XᵀX − YᵀY‖_F`. The inputs need the same item count but may differ in
/// dimension.
pub fn gram_discrepancy(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> Result<f64> {
    ensure_same_count(x, y)?;
    Ok(cross_gram_sq_diff(x.values(), x.values(), y.values(), y.values()).sqrt())
}

/// Mean over all ordered pairs `(i, j)` of `(xᵢᵀxⱼ − yᵢᵀyⱼ)²`, i.e.
/// `gram_discrepancy² / N²`.
pub fn dot_product_mse(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> Result<f64> {
    ensure_same_count(x, y)?;
    if x.count() == 0 {
        return Err(Error::InvalidArgument("mean over zero items".into()));
    }
    let n = x.count() as f64;
    Ok(cross_gram_sq_diff(x.values(), x.values(), y.values(), y.values()) / (n * n))
}

fn ensure_same_count(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> Result<()> {
    if x.count() != y.count() {
        return Err(Error::CountMismatch {
            expected: x.count(),
            found: y.count(),
        });
    }
    Ok(())
}

/// One inequality `lhs ≤ rhs` evaluated numerically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Check {
    pub fn le(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            name: name.to_owned(),
            lhs,
            rhs,
            holds: lhs <= rhs + tol,
        }
    }
}

/// Alignment quality of the optimal orthogonal map between two paired sets,
/// with every applicable bound checked.
///
/// Serialises to the JSON report schema; non-finite values (an infinite
/// `prior_bound`) become `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignmentReport {
    /// `‖Q*X − Y‖_F`.
    pub residual: f64,
    /// `‖XᵀX − YᵀY‖_F`.
    pub epsilon: f64,
    /// Mean squared dot-product error, `ε² / N²`.
    pub delta_sq: f64,
    /// `(2D)^{1/4} √ε`.
    pub theorem1_bound: f64,
    /// `√(2D) δ`.
    pub corollary2_bound: f64,
    /// `E_i ‖Q*xᵢ − yᵢ‖²`.
    pub mean_sq_alignment_error: f64,
    /// `D`-th singular value of `X` (0 when `N < D` or numerically rank deficient).
    pub sigma_min: f64,
    /// `ε / σ_min`, infinite when `σ_min` is 0.
    pub prior_bound: f64,
    /// `residual / ‖Y‖_F`.
    pub normalized_distance: f64,
    /// Mean squared deviation of `x̄ᵢᵀyⱼ` from `yᵢᵀyⱼ` and from `xᵢᵀxⱼ`.
    pub cross_sim_errors: [f64; 2],
    pub checks: Vec<Check>,
}

impl AlignmentReport {
    pub fn violations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Solves the orthogonal alignment of `x` onto `y` and evaluates the
/// alignment-error bounds. A failed check is recorded in
/// [`AlignmentReport::checks`], never hidden.
pub fn build_report(x: &EmbeddingMatrix, y: &EmbeddingMatrix) -> Result<AlignmentReport> {
    ensure_paired(x, y)?;
    if x.count() == 0 {
        return Err(Error::InvalidArgument("report needs at least one pair".into()));
    }
    Ok(report_for_matrices(x.values(), y.values()))
}

pub(crate) fn report_for_matrices(
    x: &nalgebra::DMatrix<f64>,
    y: &nalgebra::DMatrix<f64>,
) -> AlignmentReport {
    let dims = x.nrows();
    let n = x.ncols() as f64;
    let q = procrustes(x, y);
    let aligned = &q * x;

    let residual = (&aligned - y).norm();
    let epsilon_sq = cross_gram_sq_diff(x, x, y, y);
    let epsilon = epsilon_sq.sqrt();
    let delta_sq = epsilon_sq / (n * n);
    let theorem1_bound = (2.0 * dims as f64).powf(0.25) * epsilon.sqrt();
    let corollary2_bound = (2.0 * dims as f64).sqrt() * delta_sq.sqrt();
    let mean_sq_alignment_error = residual * residual / n;

    let sv = singular_values(x);
    let smax = sv.first().copied().unwrap_or(0.0);
    let sigma_min = if x.ncols() < dims { 0.0 } else { sv[dims - 1] };
    let prior_bound = if sigma_min == 0.0 || sigma_min < RANK_TOLERANCE * smax {
        f64::INFINITY
    } else {
        epsilon / sigma_min
    };

    let y_norm = y.norm();
    let normalized_distance = if y_norm > 0.0 {
        residual / y_norm
    } else if residual == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };

    let cross_sim_errors = [
        cross_gram_sq_diff(&aligned, y, y, y) / (n * n),
        cross_gram_sq_diff(&aligned, y, x, x) / (n * n),
    ];

    let mut checks = vec![
        Check::le("theorem1", residual, theorem1_bound, CHECK_TOLERANCE),
        Check::le("corollary2", mean_sq_alignment_error, corollary2_bound, CHECK_TOLERANCE),
    ];
    let unit = |m: &nalgebra::DMatrix<f64>| {
        m.column_iter().all(|c| (c.norm() - 1.0).abs() <= UNIT_NORM_TOLERANCE)
    };
    if unit(x) && unit(y) {
        checks.push(Check::le("corollary3_target", cross_sim_errors[0], corollary2_bound, CHECK_TOLERANCE));
        checks.push(Check::le("corollary3_source", cross_sim_errors[1], corollary2_bound, CHECK_TOLERANCE));
    }

    AlignmentReport {
        residual,
        epsilon,
        delta_sq,
        theorem1_bound,
        corollary2_bound,
        mean_sq_alignment_error,
        sigma_min,
        prior_bound,
        normalized_distance,
        cross_sim_errors,
        checks,
    }
}
