//! Neighborhood filters in two interchangeable forms: a brute-force window
//! evaluation (the oracle) and the constant-time reduction to moving sums of
//! basis images. The two are related by an exact algebraic identity, so they
//! must agree to floating-point accuracy.

use thiserror::Error;

use crate::kernel::KernelError;

mod bilateral;
mod nlm;
mod spatial;

pub use bilateral::{
    bilateral_filter_direct, bilateral_filter_shiftable, build_basis_stack, BasisImageStack,
    BilateralConfig,
};
pub use nlm::{
    gaussian_patch_weights, nlm_filter_direct, nlm_shiftable_experimental, patch_axis_expansion,
    NlmOutput, NlmParams, MAX_PATCH_OFFSETS, MAX_PER_DIM_ORDER,
};
pub use spatial::{spatial_filter_direct, spatial_filter_shiftable};

/// Relative scale of the denominator guard: a pixel falls back to its
/// unfiltered value when |η(x)| drops below this times Σ|a_mn(x)|.
pub const DEFAULT_ETA_FLOOR: f64 = 1e-12;

/// Default half-width of range kernels on 8-bit-style data.
pub const DEFAULT_INTENSITY_HALFWIDTH: f64 = 255.0;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("window radius {radius} exceeds the spatial kernel support {support}")]
    WindowExceedsSupport { radius: usize, support: f64 },
    #[error("range halfwidth {halfwidth} is smaller than the input intensity span {span}")]
    RangeHalfwidthTooSmall { halfwidth: f64, span: f64 },
    #[error("patch has {0} offsets; at most {MAX_PATCH_OFFSETS} are supported")]
    PatchTooLarge(usize),
    #[error("per-dimension order {0} exceeds the cap {MAX_PER_DIM_ORDER}")]
    PerDimOrderTooLarge(u32),
    #[error("per-dimension order must be at least 1")]
    PerDimOrderZero,
    #[error("the first patch offset must be (0, 0)")]
    FirstOffsetNotZero,
    #[error("smoothing parameter must be positive, got {0}")]
    InvalidSmoothing(f64),
    #[error("patch weights must be positive and match the offsets")]
    InvalidPatchWeights,
    #[error("patch offsets must be non-empty")]
    EmptyPatch,
}
