use nalgebra::DMatrix;
use proptest::prelude::*;

use orthalign::align::{apply_transform, fuse, procrustes, residual, solve_procrustes, FusionSpec, OrthogonalTransform, Transform};
use orthalign::bounds::{dot_product_mse, gram_discrepancy, matrix_abs};
use orthalign::io::{decode_embeddings, decode_transform, encode_embeddings, parse_tsv, Dtype};
use orthalign::linalg::{cross_gram_sq_diff, cross_gram_sq_diff_blocked, symmetric_eigen};
use orthalign::retrieval::{ndcg_at_k, parse_judgments, recall_at_k, top_k, RelevanceJudgments, RetrievalRun};
use orthalign::synth::{gaussian_matrix, random_orthogonal, stream_rng};
use orthalign::EmbeddingMatrix;

fn emb(values: DMatrix<f64>) -> EmbeddingMatrix {
    EmbeddingMatrix::with_sequential_ids(values).unwrap()
}

/// Gaussian pair `(X, Y)` of shape `dims × count` from a seed.
fn pair(seed: u64, dims: usize, count: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = stream_rng(seed, 0);
    (gaussian_matrix(dims, count, &mut rng), gaussian_matrix(dims, count, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn procrustes_beats_random_orthogonal_maps(seed in any::<u64>(), dims in 1usize..8, count in 1usize..40) {
        let (x, y) = pair(seed, dims, count);
        let best = residual(&procrustes(&x, &y), &x, &y);
        let mut rng = stream_rng(seed, 1);
        for _ in 0..200 {
            let q = random_orthogonal(dims, &mut rng);
            prop_assert!(best <= residual(&q, &x, &y) + 1e-9);
        }
    }

    #[test]
    fn optimality_certificate(seed in any::<u64>(), dims in 1usize..10, count in 1usize..40) {
        let (x, y) = pair(seed, dims, count);
        let q = procrustes(&x, &y);
        let s = &y * x.transpose() * q.transpose();
        let smax = (&y * x.transpose()).norm();
        prop_assert!((&s - s.transpose()).amax() <= 1e-8 * smax.max(1.0));
        let (eigs, _) = symmetric_eigen(&((&s + s.transpose()) * 0.5));
        prop_assert!(eigs[0] >= -1e-8 * smax.max(1.0));
    }

    #[test]
    fn residual_is_symmetric(seed in any::<u64>(), dims in 1usize..10, count in 1usize..40) {
        let (x, y) = pair(seed, dims, count);
        let forward = residual(&procrustes(&x, &y), &x, &y);
        let backward = residual(&procrustes(&y, &x), &y, &x);
        prop_assert!((forward - backward).abs() <= 1e-9 * forward.max(1.0));
    }

    #[test]
    fn orthogonal_maps_are_isometries(seed in any::<u64>(), dims in 1usize..12, count in 1usize..30) {
        let (x, _) = pair(seed, dims, count);
        let q = OrthogonalTransform::new(random_orthogonal(dims, &mut stream_rng(seed, 2))).unwrap();
        let mapped = apply_transform(&q, &emb(x.clone())).unwrap();
        let gram = x.tr_mul(&x);
        prop_assert!((mapped.values().tr_mul(mapped.values()) - &gram).norm() <= 1e-9 * gram.norm().max(1.0));
    }

    #[test]
    fn fusion_commutes_with_rotation(seed in any::<u64>(), dims in 1usize..8, count in 1usize..20, alpha in 0.0f64..=1.0, renorm: bool) {
        let (a, b) = pair(seed, dims, count);
        let q = OrthogonalTransform::new(random_orthogonal(dims, &mut stream_rng(seed, 3))).unwrap();
        let spec = FusionSpec::new(alpha, renorm).unwrap();
        let (a, b) = (emb(a), emb(b));
        let rotated_after = apply_transform(&q, &fuse(&a, &b, spec).unwrap()).unwrap();
        let rotated_before = fuse(&apply_transform(&q, &a).unwrap(), &apply_transform(&q, &b).unwrap(), spec).unwrap();
        prop_assert!((rotated_after.values() - rotated_before.values()).amax() <= 1e-9);
    }

    #[test]
    fn rankings_survive_joint_rotation(seed in any::<u64>(), dims in 1usize..8, docs in 1usize..120, k in 1usize..15) {
        let mut rng = stream_rng(seed, 4);
        let d = emb(gaussian_matrix(dims, docs, &mut rng));
        let q_ids: Vec<String> = (0..5).map(|i| format!("q{i}")).collect();
        let queries = EmbeddingMatrix::new(gaussian_matrix(dims, 5, &mut rng), q_ids).unwrap();
        let rot = OrthogonalTransform::new(random_orthogonal(dims, &mut rng)).unwrap();
        let plain = top_k(&queries, &d, k, false).unwrap();
        let turned = top_k(&apply_transform(&rot, &queries).unwrap(), &apply_transform(&rot, &d).unwrap(), k, false).unwrap();
        for (a, b) in plain.queries.iter().zip(&turned.queries) {
            for (ha, hb) in a.hits.iter().zip(&b.hits) {
                // Positions may only differ between near-equal scores.
                prop_assert!(ha.doc_id == hb.doc_id || (ha.score - hb.score).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn metrics_ignore_query_order(seed in any::<u64>(), docs in 5usize..60, k in 1usize..12) {
        let mut rng = stream_rng(seed, 5);
        let d = emb(gaussian_matrix(4, docs, &mut rng));
        let q_ids: Vec<String> = (0..8).map(|i| format!("q{i}")).collect();
        let queries = EmbeddingMatrix::new(gaussian_matrix(4, 8, &mut rng), q_ids.clone()).unwrap();
        let truth = random_judgments(&q_ids, d.ids(), seed);
        let mut order: Vec<usize> = (0..8).collect();
        order.reverse();
        order.swap(0, 3);
        let shuffled = queries.select(&order);
        let a = top_k(&queries, &d, k, false).unwrap();
        let b = top_k(&shuffled, &d, k, false).unwrap();
        for metric in [ndcg_at_k, recall_at_k] {
            let ma = metric(&a, &truth, k).unwrap();
            let mb = metric(&b, &truth, k).unwrap();
            let mut pa = ma.per_query.clone();
            let mut pb = mb.per_query.clone();
            pa.sort_by(|x, y| x.0.cmp(&y.0));
            pb.sort_by(|x, y| x.0.cmp(&y.0));
            prop_assert_eq!(pa, pb);
            prop_assert!((ma.mean - mb.mean).abs() <= 1e-12);
        }
    }

    #[test]
    fn metrics_ignore_document_storage_order(seed in any::<u64>(), docs in 5usize..60, k in 1usize..12) {
        let mut rng = stream_rng(seed, 9);
        let d = emb(gaussian_matrix(4, docs, &mut rng));
        let q_ids: Vec<String> = (0..6).map(|i| format!("q{i}")).collect();
        let queries = EmbeddingMatrix::new(gaussian_matrix(4, 6, &mut rng), q_ids.clone()).unwrap();
        let truth = random_judgments(&q_ids, d.ids(), seed);
        let order = rand::seq::index::sample(&mut rng, docs, docs).into_vec();
        let shuffled = d.select(&order);
        let a = top_k(&queries, &d, k, false).unwrap();
        let b = top_k(&queries, &shuffled, k, false).unwrap();
        prop_assert_eq!(&a, &b);
        for metric in [ndcg_at_k, recall_at_k] {
            prop_assert_eq!(metric(&a, &truth, k).unwrap(), metric(&b, &truth, k).unwrap());
        }
    }

    #[test]
    fn ndcg_matches_reference(seed in any::<u64>(), docs in 5usize..60, k in 1usize..12) {
        let mut rng = stream_rng(seed, 6);
        let d = emb(gaussian_matrix(3, docs, &mut rng));
        let q_ids: Vec<String> = (0..6).map(|i| format!("q{i}")).collect();
        let queries = EmbeddingMatrix::new(gaussian_matrix(3, 6, &mut rng), q_ids.clone()).unwrap();
        let truth = random_judgments(&q_ids, d.ids(), seed);
        let run = top_k(&queries, &d, k, false).unwrap();
        let got = ndcg_at_k(&run, &truth, k).unwrap();
        let expected = reference_ndcg(&run, &truth, k);
        for ((_, g), e) in got.per_query.iter().zip(&expected) {
            prop_assert!((g - e).abs() <= 1e-12);
        }
    }

    #[test]
    fn gram_identity(seed in any::<u64>(), dims in 1usize..8, count in 1usize..50) {
        let (x, y) = pair(seed, dims, count);
        let (x, y) = (emb(x), emb(y));
        let eps = gram_discrepancy(&x, &y).unwrap();
        let n = count as f64;
        let mse = dot_product_mse(&x, &y).unwrap();
        prop_assert!((eps * eps - n * n * mse).abs() <= 1e-9 * (eps * eps).max(1e-300));
    }

    #[test]
    fn blocked_gram_matches_direct(seed in any::<u64>(), dims in 1usize..6, count in 1usize..200, block in 1usize..64) {
        let (x, y) = pair(seed, dims, count);
        let direct = cross_gram_sq_diff(&x, &x, &y, &y);
        let blocked = cross_gram_sq_diff_blocked(&x, &x, &y, &y, block);
        prop_assert!((direct - blocked).abs() <= 1e-10 * direct.max(1.0));
    }

    #[test]
    fn abs_is_rotation_invariant(seed in any::<u64>(), dims in 1usize..8, count in 1usize..12) {
        let (m, _) = pair(seed, dims, count);
        let q = random_orthogonal(dims, &mut stream_rng(seed, 7));
        let base = matrix_abs(&m);
        prop_assert!((matrix_abs(&(&q * &m)) - &base).amax() <= 1e-9 * base.amax().max(1.0));
    }

    #[test]
    fn f64_binary_round_trip(seed in any::<u64>(), dims in 1usize..6, count in 0usize..20) {
        let (m, _) = pair(seed, dims, count);
        let m = emb(m);
        let (back, dtype) = decode_embeddings(&encode_embeddings(&m, Dtype::F64).unwrap()).unwrap();
        prop_assert_eq!(dtype, Dtype::F64);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn decoders_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        let _ = decode_embeddings(&bytes);
        let _ = decode_transform(&bytes);
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_tsv(&text);
        let _ = parse_judgments(&text);
    }

    #[test]
    fn decoders_never_panic_on_valid_headers(tail in proptest::collection::vec(any::<u8>(), 0..128), dims in any::<u32>(), count in any::<u64>(), id_len in any::<u64>(), dtype in 0u8..3) {
        let mut bytes = b"EMB1".to_vec();
        bytes.push(dtype);
        bytes.extend_from_slice(&dims.to_le_bytes());
        bytes.extend_from_slice(&count.to_le_bytes());
        bytes.extend_from_slice(&id_len.to_le_bytes());
        bytes.extend_from_slice(&tail);
        let _ = decode_embeddings(&bytes);
        let mut t = b"QMT1".to_vec();
        t.extend_from_slice(&dims.to_le_bytes());
        t.extend_from_slice(&tail);
        let _ = decode_transform(&t);
    }
}

#[test]
fn rotation_recovered_through_embedding_api() {
    let mut rng = stream_rng(11, 0);
    let x = gaussian_matrix(5, 30, &mut rng);
    let q0 = random_orthogonal(5, &mut rng);
    let q = solve_procrustes(&emb(x.clone()), &emb(&q0 * &x)).unwrap();
    assert!((q.matrix() - q0).norm() < 1e-9);
}

fn random_judgments(queries: &[String], docs: &[String], seed: u64) -> RelevanceJudgments {
    use rand::Rng as _;
    let mut rng = stream_rng(seed, 99);
    let mut truth = RelevanceJudgments::new();
    for q in queries {
        for d in docs {
            if rng.random_bool(0.2) {
                truth.insert(q, d, rng.random_range(0..4) as f64).unwrap();
            }
        }
        if truth.get(q).is_none() {
            truth.insert(q, &docs[0], 0.0).unwrap();
        }
    }
    truth
}

/// Textbook nDCG@k written independently of the library.
fn reference_ndcg(run: &RetrievalRun, truth: &RelevanceJudgments, k: usize) -> Vec<f64> {
    run.queries
        .iter()
        .map(|q| {
            let mut dcg = 0.0;
            for (i, h) in q.hits.iter().enumerate() {
                if i >= k {
                    break;
                }
                let g = truth.grade(&q.query_id, &h.doc_id);
                dcg += (2f64.powf(g) - 1.0) / ((i + 2) as f64).ln() * std::f64::consts::LN_2;
            }
            let mut grades: Vec<f64> = truth.get(&q.query_id).unwrap().values().copied().collect();
            grades.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let mut idcg = 0.0;
            for (i, g) in grades.iter().enumerate().take(k) {
                idcg += (2f64.powf(*g) - 1.0) / ((i + 2) as f64).ln() * std::f64::consts::LN_2;
            }
            if idcg == 0.0 {
                0.0
            } else {
                dcg / idcg
            }
        })
        .collect()
}
