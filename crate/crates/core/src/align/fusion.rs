use crate::embedding::{ensure_paired, normalize_columns, EmbeddingMatrix};
use crate::error::{Error, Result};

/// Convex combination weights for merging two embeddings of one item.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionSpec {
    alpha: f64,
    renormalize_after: bool,
}

impl FusionSpec {
    pub const DEFAULT_ALPHA: f64 = 0.5;

    pub fn new(alpha: f64, renormalize_after: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self {
            alpha,
            renormalize_after,
        })
    }

    /// Weight on the first input.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn renormalize_after(&self) -> bool {
        self.renormalize_after
    }
}

impl Default for FusionSpec {
    fn default() -> Self {
        Self {
            alpha: Self::DEFAULT_ALPHA,
            renormalize_after: false,
        }
    }
}

/// Column `i` becomes `α·first_i + (1 − α)·second_i`, rescaled to unit norm
/// when requested (zero columns stay zero).
pub fn fuse(first: &EmbeddingMatrix, second: &EmbeddingMatrix, spec: FusionSpec) -> Result<EmbeddingMatrix> {
    ensure_paired(first, second)?;
    let mut values = if spec.alpha == 1.0 {
        first.values().clone()
    } else if spec.alpha == 0.0 {
        second.values().clone()
    } else {
        first.values() * spec.alpha + second.values() * (1.0 - spec.alpha)
    };
    if spec.renormalize_after {
        normalize_columns(&mut values);
    }
    first.with_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> (EmbeddingMatrix, EmbeddingMatrix) {
        (
            EmbeddingMatrix::from_columns(&["a"], &[vec![1.0, 0.0]]).unwrap(),
            EmbeddingMatrix::from_columns(&["a"], &[vec![0.0, 1.0]]).unwrap(),
        )
    }

    #[test]
    fn extremes_select_one_input() {
        let (a, b) = pair();
        assert_eq!(fuse(&a, &b, FusionSpec::new(1.0, false).unwrap()).unwrap(), a);
        assert_eq!(fuse(&a, &b, FusionSpec::new(0.0, false).unwrap()).unwrap(), b);
    }

    #[test]
    fn half_and_renormalize() {
        let (a, b) = pair();
        let f = fuse(&a, &b, FusionSpec::new(0.5, true).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((f.values()[(0, 0)] - h).abs() < 1e-15);
        assert!((f.values()[(1, 0)] - h).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_alpha_and_mismatch() {
        assert!(FusionSpec::new(1.5, false).is_err());
        assert!(FusionSpec::new(f64::NAN, false).is_err());
        let (a, _) = pair();
        let c = EmbeddingMatrix::from_columns(&["b"], &[vec![0.0, 1.0]]).unwrap();
        assert!(fuse(&a, &c, FusionSpec::default()).is_err());
    }
}
