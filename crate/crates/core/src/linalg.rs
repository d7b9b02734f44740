//! Dense linear-algebra helpers shared by the solvers and the bound checks.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Singular values at or above this fraction of the largest one count
/// toward the numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Singular values within this fraction of the largest one are treated as
/// equal when ordering singular triplets.
const TIE_TOLERANCE: f64 = 1e-12;

/// Full singular value decomposition `M = U · diag(σ) · Vᵀ` with singular
/// values in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v_t: DMatrix<f64>,
}

impl Svd {
    /// Decomposes `m`, ordering triplets by descending singular value.
    /// Within a group of equal singular values, triplets are ordered so that
    /// their left singular vectors decrease lexicographically, which makes
    /// the factors reproducible regardless of the backend's internal order.
    pub fn new(m: &DMatrix<f64>) -> Self {
        let (u, s, v_t) = decompose(m, false);
        let s = DVector::from_vec(s);

        let smax = s.iter().cloned().fold(0.0_f64, f64::max);
        let tie = TIE_TOLERANCE * smax;
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&a, &b| {
            if (s[a] - s[b]).abs() <= tie {
                lexicographic_desc(u.column(a).as_slice(), u.column(b).as_slice())
            } else {
                s[b].total_cmp(&s[a])
            }
        });

        Self {
            u: u.select_columns(order.iter()),
            singular_values: DVector::from_iterator(order.len(), order.iter().map(|&i| s[i])),
            v_t: v_t.select_rows(order.iter()),
        }
    }

    pub fn v(&self) -> DMatrix<f64> {
        self.v_t.transpose()
    }

    pub fn rank(&self) -> usize {
        numerical_rank(self.singular_values.as_slice())
    }
}

fn lexicographic_desc(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.total_cmp(x) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Singular values of `m` in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s = faer_matrix(m)
        .singular_values()
        .expect("SVD failed to converge on finite input");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Thin SVD `M = U·diag(σ)·Vᵀ` with `min(rows, cols)` triplets, singular
/// values descending. Returns `(U, σ, Vᵀ)`.
pub fn thin_svd(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    decompose(m, true)
}

// nalgebra's SVD can return factors that do not reconstruct rank-deficient
// inputs (seen on rank-one 12 × 12 products), so all SVDs go through faer.
fn decompose(m: &DMatrix<f64>, thin: bool) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        let (ur, vc) = if thin { (0, 0) } else { (rows, cols) };
        return (DMatrix::identity(rows, ur), Vec::new(), DMatrix::identity(vc, cols));
    }
    let fm = faer_matrix(m);
    let svd = if thin { fm.thin_svd() } else { fm.svd() }.expect("SVD failed to converge on finite input");
    let (u, v) = (svd.U(), svd.V());
    let s = (0..k).map(|i| svd.S()[i]).collect();
    let u = DMatrix::from_fn(rows, u.ncols(), |i, j| u[(i, j)]);
    let v_t = DMatrix::from_fn(v.ncols(), cols, |i, j| v[(j, i)]);
    (u, s, v_t)
}

fn faer_matrix(m: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Number of singular values `σ` with `σ ≥ RANK_TOLERANCE · σ_max`.
/// The zero matrix has rank 0.
pub fn numerical_rank(singular_values: &[f64]) -> usize {
    let smax = singular_values.iter().cloned().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    singular_values
        .iter()
        .filter(|&&s| s >= RANK_TOLERANCE * smax)
        .count()
}

pub fn rank(m: &DMatrix<f64>) -> usize {
    numerical_rank(&singular_values(m))
}

/// Rank of `m` with the cutoff taken relative to `scale` (or to `m`'s own
/// largest singular value if that is bigger). Use it for differences such as
/// `P·A − B`, where roundoff can leave a tiny but full-rank matrix.
pub fn rank_relative(m: &DMatrix<f64>, scale: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().cloned().fold(scale.abs(), f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s >= RANK_TOLERANCE * smax).count()
}

/// Orthonormal basis of the column space of `m` (numerical rank columns).
pub fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = Svd::new(m);
    let r = svd.rank();
    svd.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `basis` in `R^n`.
pub fn orthogonal_complement(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let n = basis.nrows();
    let k = basis.ncols();
    if k == 0 {
        return DMatrix::identity(n, n);
    }
    if k >= n {
        return DMatrix::zeros(n, 0);
    }
    // I - BBᵀ is a projector: eigenvalues are 0 (k times) and 1 (n - k times).
    let projector = DMatrix::identity(n, n) - basis * basis.transpose();
    leading_eigenvectors(&projector, n - k)
}

/// Orthonormal basis of the top `count` left singular directions of `m`.
pub fn leading_left_singular_vectors(m: &DMatrix<f64>, count: usize) -> DMatrix<f64> {
    if count == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = Svd::new(m);
    svd.u.columns(0, count).into_owned()
}

fn leading_eigenvectors(sym: &DMatrix<f64>, count: usize) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(symmetrize(sym));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    eig.eigenvectors.select_columns(order.iter().take(count))
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigenvalues (ascending) and eigenvectors of the symmetric part of `m`.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    (values, eig.eigenvectors.select_columns(order.iter()))
}

/// `‖QᵀQ − I‖_F`.
pub fn orthogonality_defect(q: &DMatrix<f64>) -> f64 {
    let n = q.ncols();
    (q.tr_mul(q) - DMatrix::<f64>::identity(n, n)).norm()
}

/// Column count above which cross-Gram discrepancies are streamed in blocks
/// instead of materialising `N × N` matrices.
pub const STREAMING_THRESHOLD: usize = 1 << 14;
const STREAM_BLOCK: usize = 1024;

/// Squared Frobenius norm of `AᵀB − CᵀD` where all four matrices have the
/// same number of columns. Streams over column blocks for large inputs.
pub fn cross_gram_sq_diff(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> f64 {
    if a.ncols() > STREAMING_THRESHOLD {
        cross_gram_sq_diff_blocked(a, b, c, d, STREAM_BLOCK)
    } else {
        (a.tr_mul(b) - c.tr_mul(d)).norm_squared()
    }
}

pub fn cross_gram_sq_diff_blocked(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    block: usize,
) -> f64 {
    use rayon::prelude::*;

    let n = a.ncols();
    let starts: Vec<usize> = (0..n).step_by(block.max(1)).collect();
    let row_sums: Vec<f64> = starts
        .par_iter()
        .map(|&i| {
            let rows = block.min(n - i);
            let a_i = a.columns(i, rows);
            let c_i = c.columns(i, rows);
            let mut acc = 0.0;
            for &j in &starts {
                let cols = block.min(n - j);
                let diff = a_i.tr_mul(&b.columns(j, cols)) - c_i.tr_mul(&d.columns(j, cols));
                acc += diff.norm_squared();
            }
            acc
        })
        .collect();
    // Fixed summation order keeps the result independent of scheduling.
    row_sums.iter().sum()
}
