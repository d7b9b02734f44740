//! The rank-capped minimiser against every signed-permutation completion of
//! a fixed singular basis.

use nalgebra::{DMatrix, DVector};

use orthalign::align::{procrustes, rank_aware_procrustes, residual, Transform};
use orthalign::linalg::rank_relative;
use orthalign::synth::{gaussian_matrix, stream_rng};

/// All 3 × 3 signed permutation matrices.
fn signed_permutations() -> Vec<DMatrix<f64>> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for p in perms {
        for signs in 0..8u32 {
            let mut m = DMatrix::zeros(3, 3);
            for (col, &row) in p.iter().enumerate() {
                m[(row, col)] = if signs >> col & 1 == 1 { -1.0 } else { 1.0 };
            }
            out.push(m);
        }
    }
    out
}

fn outer(u: &DVector<f64>, v: &DVector<f64>) -> DMatrix<f64> {
    u * v.transpose()
}

fn rank_of_residual(p: &DMatrix<f64>, a: &DMatrix<f64>, b: &DMatrix<f64>) -> usize {
    rank_relative(&(p * a - b), a.norm().max(b.norm()))
}

#[test]
fn orthogonal_row_spaces_admit_a_rank_two_minimiser() {
    // A = a·pᵀ, B = b·qᵀ with p ⊥ q, so B·Aᵀ = 0 and every orthogonal map
    // is a minimiser. Completing the (arbitrary) singular basis U = V = I
    // with signed permutations gives minimisers whose residual has rank 2.
    let a_vec = DVector::from_vec(vec![1.0, 0.0, 0.0]);
    let b_vec = DVector::from_vec(vec![0.0, 2.0, 0.0]);
    let p = DVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]);
    let q = DVector::from_vec(vec![0.0, 0.0, 1.0, -1.0]);
    let a = outer(&a_vec, &p);
    let b = outer(&b_vec, &q);
    assert_eq!((&b * a.transpose()).amax(), 0.0);

    let completions = signed_permutations();
    let residuals: Vec<f64> = completions.iter().map(|m| residual(m, &a, &b)).collect();
    let ranks: Vec<usize> = completions.iter().map(|m| rank_of_residual(m, &a, &b)).collect();
    let optimum = residual(&procrustes(&a, &b), &a, &b);
    assert!(residuals.iter().all(|r| (r - optimum).abs() < 1e-12), "all completions are minimisers");
    assert!(ranks.contains(&2), "some naive completion has rank 2");
    assert!(ranks.contains(&1));
    assert_eq!(*ranks.iter().min().unwrap(), 1);

    let p_star = rank_aware_procrustes(&a, &b, 1).unwrap();
    assert!((residual(p_star.matrix(), &a, &b) - optimum).abs() < 1e-9);
    assert!(rank_of_residual(p_star.matrix(), &a, &b) <= 1);
}

#[test]
fn random_rank_one_pairs_with_orthogonal_row_spaces() {
    for seed in 0..50 {
        let mut rng = stream_rng(seed, 0);
        let a_vec = gaussian_matrix(3, 1, &mut rng).column(0).into_owned();
        let b_vec = gaussian_matrix(3, 1, &mut rng).column(0).into_owned();
        let p = gaussian_matrix(4, 1, &mut rng).column(0).into_owned();
        let raw_q = gaussian_matrix(4, 1, &mut rng).column(0).into_owned();
        let q = &raw_q - &p * (p.dot(&raw_q) / p.norm_squared());
        let (a, b) = (outer(&a_vec, &p), outer(&b_vec, &q));

        let p_star = rank_aware_procrustes(&a, &b, 1).unwrap();
        let optimum = residual(&procrustes(&a, &b), &a, &b);
        assert!((residual(p_star.matrix(), &a, &b) - optimum).abs() < 1e-9);
        assert!(rank_of_residual(p_star.matrix(), &a, &b) <= 1, "seed {seed}");
    }
}

#[test]
fn rank_one_cross_product_forces_rank_one_everywhere() {
    // With rank(B·Aᵀ) = 1 the leading pair already maps Col(A) onto Col(B),
    // so every completion (here: every signed permutation of the trailing
    // 2 × 2 block) leaves a rank-one residual.
    let a = outer(&DVector::from_vec(vec![1.0, 0.0, 0.0]), &DVector::from_vec(vec![1.0, 2.0, 0.0, 1.0]));
    let b = outer(&DVector::from_vec(vec![3.0, 0.0, 0.0]), &DVector::from_vec(vec![2.0, 1.0, 1.0, 0.0]));
    let optimum = residual(&procrustes(&a, &b), &a, &b);
    for m in signed_permutations() {
        if m[(0, 0)] != 1.0 {
            continue;
        }
        assert!((residual(&m, &a, &b) - optimum).abs() < 1e-12);
        assert_eq!(rank_of_residual(&m, &a, &b), 1);
    }
    let p_star = rank_aware_procrustes(&a, &b, 1).unwrap();
    assert_eq!(rank_of_residual(p_star.matrix(), &a, &b), 1);
}

#[test]
fn rank_above_cap_is_rejected() {
    let mut rng = stream_rng(3, 0);
    let a = gaussian_matrix(3, 5, &mut rng);
    let err = rank_aware_procrustes(&a, &a, 2).unwrap_err();
    assert_eq!(err.code(), "rank_precondition");
}
