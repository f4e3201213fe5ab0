//! Constant-time image filtering with shiftable kernels.
//!
//! A kernel is *shiftable* when each of its translates is a fixed linear
//! combination of finitely many basis functions, with coefficients that
//! depend only on the shift. For such kernels, neighborhood filters reduce to
//! moving sums of pointwise-transformed images: the moving sum costs one add
//! and one subtract per pixel regardless of the window radius, so the whole
//! filter runs in O(1) per pixel and scales only with the basis size.
//!
//! The crate provides:
//!
//! - shiftable kernel families (raised-cosine, polynomial window, separable
//!   and directional 2-D products) and Gaussian approximations with
//!   controlled validity thresholds and truncation ([`kernel`]);
//! - the recursive moving-sum engine ([`moving_sum`]);
//! - spatial, bilateral and experimental non-local-means filters, each with a
//!   brute-force twin for verification ([`filters`]);
//! - PGM/CSV/JSON input and output ([`io`]).

pub mod buffer;
pub mod filters;
pub mod io;
pub mod kernel;
pub mod moving_sum;

mod sampler;

pub use buffer::{max_relative_deviation, BufferError, ImageBuffer};
pub use filters::{
    bilateral_filter_direct, bilateral_filter_shiftable, build_basis_stack,
    gaussian_patch_weights, nlm_filter_direct, nlm_shiftable_experimental, spatial_filter_direct,
    spatial_filter_shiftable, BasisImageStack, BilateralConfig, FilterError, NlmOutput, NlmParams,
    DEFAULT_ETA_FLOOR, DEFAULT_INTENSITY_HALFWIDTH,
};
pub use kernel::{
    corner_overshoot, directional_kernel, fit_gaussian_polynomial, fit_gaussian_raised_cosine,
    isotropy_metric, polynomial_expansion, polynomial_min_order, raised_cosine_expansion,
    raised_cosine_min_order, truncate_expansion, BasisFunction1D, FitVariant, GaussianFit,
    KernelError, KernelSpec, ShiftableExpansion1D, SpatialExpansion, TruncationOutcome,
};
pub use moving_sum::{moving_sum, moving_sum_stack, BoundaryPolicy};

#[cfg(test)]
pub(crate) mod test_util {
    pub(crate) use crate::sampler::SplitMix64;
    use crate::ImageBuffer;

    /// Deterministic image with samples uniform in [0, 255].
    pub(crate) fn random_image(width: usize, height: usize, seed: u64) -> ImageBuffer {
        let mut rng = SplitMix64::new(seed);
        let data = (0..width * height).map(|_| rng.uniform(0.0, 255.0)).collect();
        ImageBuffer::from_vec(width, height, data).expect("finite samples")
    }
}
