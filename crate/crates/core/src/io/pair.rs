use std::collections::{BTreeSet, HashMap};

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairPolicy {
    /// Keep ids present in both inputs.
    #[default]
    Intersect,
    /// Require identical id sets.
    Strict,
}

/// Reorders two embedding sets so that column `i` of both refers to the same
/// id. The shared ids come out in lexicographic order.
pub fn pair_by_id(
    a: &EmbeddingMatrix,
    b: &EmbeddingMatrix,
    policy: PairPolicy,
) -> Result<(EmbeddingMatrix, EmbeddingMatrix)> {
    let a_index: HashMap<&str, usize> = a.ids().iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let b_index: HashMap<&str, usize> = b.ids().iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();

    if policy == PairPolicy::Strict {
        let offenders: BTreeSet<&str> = a_index
            .keys()
            .filter(|id| !b_index.contains_key(*id))
            .chain(b_index.keys().filter(|id| !a_index.contains_key(*id)))
            .copied()
            .collect();
        if !offenders.is_empty() {
            return Err(Error::PairingMismatch {
                symmetric_difference: offenders.len(),
                offenders: offenders.iter().take(10).map(|s| s.to_string()).collect(),
            });
        }
    }

    let mut shared: Vec<&str> = a_index.keys().filter(|id| b_index.contains_key(*id)).copied().collect();
    shared.sort_unstable();
    let a_cols: Vec<usize> = shared.iter().map(|id| a_index[id]).collect();
    let b_cols: Vec<usize> = shared.iter().map(|id| b_index[id]).collect();
    Ok((a.select(&a_cols), b.select(&b_cols)))
}
