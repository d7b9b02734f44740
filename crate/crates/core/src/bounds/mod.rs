//! Alignment-error bounds: discrepancy measures, numerical checks of the
//! inequalities, and constructions that attain them.

mod psd;
mod report;
mod sweep;
mod tightness;

pub use psd::{check_psk_inequality, matrix_abs, schatten_norm, PskCheck, PSD_TOLERANCE, PSK_TOLERANCE};
pub use report::{
    build_report, dot_product_mse, gram_discrepancy, AlignmentReport, Check, CHECK_TOLERANCE,
    UNIT_NORM_TOLERANCE,
};
pub(crate) use sweep::median;
pub use sweep::{median_by_level, perturbation_sweep, SweepRow};
pub use tightness::{theorem1_bound, tightness_example};
