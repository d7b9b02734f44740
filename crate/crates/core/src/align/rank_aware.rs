//! Procrustes minimiser whose residual has bounded rank.
//!
//! When `B·Aᵀ` has rank `r` below the ambient dimension, the trailing
//! singular vectors of its SVD are arbitrary and so is `U·Vᵀ`. A careless
//! completion can make `P·A − B` have rank up to `rank(A) + rank(B)`. Here the
//! completion is chosen so that
//!
//! * `u₁ … u_R` span `Col(B)` (with `R = rank(B) ≥ rank(A)`), and
//! * `v_{R+1} … v_M` lie in `Null(Aᵀ)`,
//!
//! so `Col(P·A) ⊆ Col(B)` and `rank(P·A − B) ≤ R`.

use nalgebra::DMatrix;

use super::transform::OrthogonalTransform;
use crate::error::{Error, Result};
use crate::linalg::{column_space, leading_left_singular_vectors, orthogonal_complement, rank, Svd, RANK_TOLERANCE};

/// Global minimiser `P` of `‖P·A − B‖_F` over orthogonal matrices with
/// `rank(P·A − B) ≤ rank_cap`, for `M × N` inputs whose numerical ranks are
/// both at most `rank_cap`.
pub fn rank_aware_procrustes(
    source: &DMatrix<f64>,
    target: &DMatrix<f64>,
    rank_cap: usize,
) -> Result<OrthogonalTransform> {
    if source.shape() != target.shape() {
        return Err(Error::DimensionMismatch {
            expected: source.nrows(),
            found: target.nrows(),
        });
    }
    if rank_cap == 0 {
        return Err(Error::InvalidArgument("rank cap must be positive".into()));
    }
    for m in [source, target] {
        if let Some(i) = m.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: i % m.nrows(),
                column: i / m.nrows(),
            });
        }
    }
    let source_rank = rank(source);
    let target_rank = rank(target);
    for r in [source_rank, target_rank] {
        if r > rank_cap {
            return Err(Error::RankPrecondition { rank: r, cap: rank_cap });
        }
    }

    let p = if source_rank <= target_rank {
        complete(source, target)
    } else {
        // Solve the swapped problem and invert.
        complete(target, source).transpose()
    };
    OrthogonalTransform::new(p)
}

/// Builds `P = U·Vᵀ` for `rank(a) ≤ rank(b)`.
fn complete(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let dims = a.nrows();
    let svd = Svd::new(&(b * a.transpose()));
    // Judge the rank of B·Aᵀ against the input scale: when the row spaces are
    // orthogonal, B·Aᵀ is pure roundoff and its singular vectors are noise.
    let scale = RANK_TOLERANCE * (a.norm() * b.norm()).max(svd.singular_values[0]);
    let r = svd.singular_values.iter().filter(|&&s| s > 0.0 && s >= scale).count();
    let v = svd.v();

    let b_basis = column_space(b);
    // r ≤ rank(B) in exact arithmetic; guard against tolerance effects.
    let rb = b_basis.ncols().max(r);
    let u_head = svd.u.columns(0, r).into_owned();
    let v_head = v.columns(0, r).into_owned();

    // Complete u₁…u_r to a basis of Col(B); the part of Col(B) orthogonal
    // to u₁…u_r has dimension rb − r.
    let u_fill = if rb > r {
        let residual = &b_basis - &u_head * u_head.tr_mul(&b_basis);
        leading_left_singular_vectors(&residual, rb - r)
    } else {
        DMatrix::zeros(dims, 0)
    };
    let u_span = hstack(&[&u_head, &u_fill]);
    let u_rest = orthogonal_complement(&u_span);
    let u = hstack(&[&u_span, &u_rest]);

    // Null(Aᵀ) ⊆ Null(B·Aᵀ), so its basis is (numerically) orthogonal to
    // v₁…v_r; project anyway before picking the trailing dims − rb vectors.
    let a_basis = column_space(a);
    let a_null = orthogonal_complement(&a_basis);
    let v_tail = if dims > rb {
        let projected = &a_null - &v_head * v_head.tr_mul(&a_null);
        leading_left_singular_vectors(&projected, dims - rb)
    } else {
        DMatrix::zeros(dims, 0)
    };
    let v_fill = orthogonal_complement(&hstack(&[&v_head, &v_tail]));
    let v = hstack(&[&v_head, &v_fill, &v_tail]);

    debug_assert_eq!(u.ncols(), dims);
    debug_assert_eq!(v.ncols(), dims);
    u * v.transpose()
}

fn hstack(parts: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let rows = parts[0].nrows();
    let cols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        out.columns_mut(at, p.ncols()).copy_from(*p);
        at += p.ncols();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::procrustes::{procrustes, residual};
    use crate::linalg::rank_relative;
    use crate::synth::{gaussian_matrix, stream_rng};

    fn low_rank(rows: usize, cols: usize, r: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = stream_rng(seed, 0);
        gaussian_matrix(rows, r, &mut rng) * gaussian_matrix(r, cols, &mut rng)
    }

    #[test]
    fn equal_inputs() {
        let a = low_rank(3, 5, 2, 1);
        let p = rank_aware_procrustes(&a, &a, 2).unwrap().into_matrix();
        assert!(residual(&p, &a, &a) < 1e-9);
        assert_eq!(rank_relative(&(&p * &a - &a), a.norm()), 0);
    }

    #[test]
    fn random_rank_two_in_four() {
        for seed in 0..20 {
            let a = low_rank(4, 6, 2, 2 * seed);
            let b = low_rank(4, 6, 2, 2 * seed + 1);
            let p = rank_aware_procrustes(&a, &b, 2).unwrap().into_matrix();
            let q = procrustes(&a, &b);
            assert!((residual(&p, &a, &b) - residual(&q, &a, &b)).abs() < 1e-9);
            assert!(rank_relative(&(&p * &a - &b), a.norm().max(b.norm())) <= 2);
        }
    }

    #[test]
    fn mismatched_ranks_use_the_swapped_construction() {
        let a = low_rank(5, 7, 3, 10);
        let b = low_rank(5, 7, 1, 11);
        let p = rank_aware_procrustes(&a, &b, 3).unwrap().into_matrix();
        let q = procrustes(&a, &b);
        assert!((residual(&p, &a, &b) - residual(&q, &a, &b)).abs() < 1e-9);
        assert!(rank_relative(&(&p * &a - &b), a.norm().max(b.norm())) <= 3);
    }

    #[test]
    fn rejects_rank_above_cap() {
        let a = low_rank(4, 6, 3, 5);
        let err = rank_aware_procrustes(&a, &a, 2).unwrap_err();
        assert!(matches!(err, Error::RankPrecondition { rank: 3, cap: 2 }));
    }
}
