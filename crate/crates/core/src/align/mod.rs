//! Alignment solvers and geometry-preserving transforms.

mod center;
mod fusion;
mod procrustes;
mod rank_aware;
mod transform;

pub use center::{apply_centering, fit_centering, Centered, CenteringTransform};
pub use fusion::{fuse, FusionSpec};
pub use procrustes::{procrustes, residual, solve_linear, solve_procrustes, PINV_CUTOFF};
pub use rank_aware::rank_aware_procrustes;
pub use transform::{
    apply_transform, pad_transform, zero_pad, AnyTransform, LinearTransform, OrthogonalTransform, Transform,
    ORTHOGONALITY_TOLERANCE,
};
