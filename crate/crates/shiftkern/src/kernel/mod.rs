//! Shiftable kernel construction, Gaussian fitting and kernel quality
//! metrics.

use thiserror::Error;

pub mod basis;
pub mod fit;
pub mod metrics;
pub mod spatial;
pub mod spec;

pub use basis::{
    polynomial_expansion, raised_cosine_expansion, truncate_expansion, BasisFunction1D,
    ShiftableExpansion1D, TruncationOutcome,
};
pub use fit::{
    fit_gaussian_polynomial, fit_gaussian_polynomial_forced, fit_gaussian_raised_cosine,
    fit_gaussian_raised_cosine_forced, polynomial_min_order, raised_cosine_min_order, FitVariant,
    GaussianFit, DEFAULT_ORDER_CAP,
};
pub use metrics::{corner_overshoot, isotropy_metric, isotropy_of, overshoot_of};
pub use spatial::SpatialExpansion;
pub use spec::{directional_kernel, KernelSpec};

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("halfwidth must be positive and finite, got {0}")]
    InvalidHalfwidth(f64),
    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("truncation tolerance must lie in [0, 1), got {0}")]
    InvalidTolerance(f64),
    #[error("point {0} lies outside the kernel support [-{1}, {1}]")]
    OutOfDomain(f64, f64),
    #[error("{point}-dimensional point supplied to a {kernel}-dimensional kernel")]
    DimensionMismatch { point: usize, kernel: usize },
    #[error("separable axes must be one-dimensional kernels")]
    NonSeparableAxis,
    #[error("directional kernels need at least one direction")]
    InvalidDirectionCount,
}
