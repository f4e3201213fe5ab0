//! Shiftable approximations of the Gaussian kernel.
//!
//! The Gaussian itself is not shiftable, but argument-scaled raised-cosine
//! and polynomial kernels converge to it pointwise as the order grows:
//!
//! ```text
//! cos(t / (σ√N))^N        → exp(-t² / 2σ²)
//! (1 - t² / (2Nσ²))^N     → exp(-t² / 2σ²)
//! ```
//!
//! The order must clear a validity threshold for the approximant to stay
//! nonnegative and unimodal over the working interval: the cosine argument
//! must not leave [-π/2, π/2], and the polynomial base must not go negative.

use super::basis::{
    polynomial_scaled, raised_cosine_scaled, truncate_expansion, ShiftableExpansion1D,
};
use super::KernelError;

/// Orders above this are allowed but flagged in the fit record.
pub const DEFAULT_ORDER_CAP: u32 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitVariant {
    RaisedCosine,
    Polynomial,
}

impl FitVariant {
    pub fn name(&self) -> &'static str {
        match self {
            FitVariant::RaisedCosine => "raised-cosine",
            FitVariant::Polynomial => "polynomial",
        }
    }
}

/// A fitted shiftable approximation of `exp(-t²/2σ²)` on [-T, T].
#[derive(Debug, Clone)]
pub struct GaussianFit {
    pub sigma: f64,
    pub halfwidth: f64,
    /// Chosen kernel exponent N.
    pub order: u32,
    pub variant: FitVariant,
    /// The (possibly truncated) expansion of the fitted kernel.
    pub expansion: ShiftableExpansion1D,
    /// Sup-norm deviation from the target Gaussian on a 1001-point grid.
    pub sup_error: f64,
    /// Basis terms dropped by truncation.
    pub truncated_terms: usize,
    /// Grid deviation bound introduced by truncation.
    pub truncation_deviation: f64,
    /// Set when the selected order exceeds [`DEFAULT_ORDER_CAP`].
    pub order_cap_exceeded: bool,
}

fn check_fit_args(sigma: f64, halfwidth: f64, epsilon: f64) -> Result<(), KernelError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(KernelError::InvalidSigma(sigma));
    }
    if !(halfwidth > 0.0 && halfwidth.is_finite()) {
        return Err(KernelError::InvalidHalfwidth(halfwidth));
    }
    if !(0.0..1.0).contains(&epsilon) || !epsilon.is_finite() {
        return Err(KernelError::InvalidTolerance(epsilon));
    }
    Ok(())
}

/// Smallest integer at or above `x`, with a relative guard so that exact
/// thresholds do not round up through floating-point noise.
fn min_order_from_threshold(x: f64) -> u32 {
    (x * (1.0 - 1e-9)).ceil().max(1.0) as u32
}

/// Smallest valid raised-cosine order for a target (σ, T): N ≥ (2T/πσ)²,
/// which keeps the cosine argument inside [-π/2, π/2].
pub fn raised_cosine_min_order(sigma: f64, halfwidth: f64) -> u32 {
    let ratio = 2.0 * halfwidth / (std::f64::consts::PI * sigma);
    min_order_from_threshold(ratio * ratio)
}

/// Smallest valid polynomial order for a target (σ, T): N ≥ T²/(2σ²),
/// which keeps the base 1 - t²/(2Nσ²) nonnegative.
pub fn polynomial_min_order(sigma: f64, halfwidth: f64) -> u32 {
    min_order_from_threshold(halfwidth * halfwidth / (2.0 * sigma * sigma))
}

fn sup_error_against_gaussian(
    expansion: &ShiftableExpansion1D,
    sigma: f64,
    halfwidth: f64,
) -> f64 {
    let mut sup = 0.0f64;
    for i in 0..1001 {
        let t = -halfwidth + 2.0 * halfwidth * (i as f64) / 1000.0;
        let target = (-t * t / (2.0 * sigma * sigma)).exp();
        sup = sup.max((expansion.kernel_value(t) - target).abs());
    }
    sup
}

/// Fits `cos(t/(σ√N))^N` with the smallest valid N, truncates the expansion
/// per `epsilon`, and records the measured sup-norm error.
pub fn fit_gaussian_raised_cosine(
    sigma: f64,
    halfwidth: f64,
    epsilon: f64,
) -> Result<GaussianFit, KernelError> {
    check_fit_args(sigma, halfwidth, epsilon)?;
    let order = raised_cosine_min_order(sigma, halfwidth);
    let base_frequency = 1.0 / (sigma * (order as f64).sqrt());
    let full = raised_cosine_scaled(order, base_frequency, halfwidth);
    let truncated = truncate_expansion(&full, epsilon)?;
    let sup_error = sup_error_against_gaussian(&truncated.expansion, sigma, halfwidth);
    Ok(GaussianFit {
        sigma,
        halfwidth,
        order,
        variant: FitVariant::RaisedCosine,
        expansion: truncated.expansion,
        sup_error,
        truncated_terms: truncated.dropped,
        truncation_deviation: truncated.deviation_bound,
        order_cap_exceeded: order > DEFAULT_ORDER_CAP,
    })
}

/// Fits `(1 - t²/(2Nσ²))^N` with the smallest valid N; otherwise as the
/// raised-cosine fit.
pub fn fit_gaussian_polynomial(
    sigma: f64,
    halfwidth: f64,
    epsilon: f64,
) -> Result<GaussianFit, KernelError> {
    check_fit_args(sigma, halfwidth, epsilon)?;
    let order = polynomial_min_order(sigma, halfwidth);
    let scale = sigma * (2.0 * order as f64).sqrt();
    let full = polynomial_scaled(order, scale, halfwidth);
    let truncated = truncate_expansion(&full, epsilon)?;
    let sup_error = sup_error_against_gaussian(&truncated.expansion, sigma, halfwidth);
    Ok(GaussianFit {
        sigma,
        halfwidth,
        order,
        variant: FitVariant::Polynomial,
        expansion: truncated.expansion,
        sup_error,
        truncated_terms: truncated.dropped,
        truncation_deviation: truncated.deviation_bound,
        order_cap_exceeded: order > DEFAULT_ORDER_CAP,
    })
}

/// Fits the raised-cosine kernel at a caller-forced order, keeping the
/// argument scaling rule `cos(t/(σ√N))^N`. Below the validity threshold the
/// kernel loses nonnegativity or unimodality; callers opt into that.
pub fn fit_gaussian_raised_cosine_forced(
    sigma: f64,
    halfwidth: f64,
    epsilon: f64,
    order: u32,
) -> Result<GaussianFit, KernelError> {
    check_fit_args(sigma, halfwidth, epsilon)?;
    let order = order.max(1);
    let base_frequency = 1.0 / (sigma * (order as f64).sqrt());
    let full = raised_cosine_scaled(order, base_frequency, halfwidth);
    let truncated = truncate_expansion(&full, epsilon)?;
    let sup_error = sup_error_against_gaussian(&truncated.expansion, sigma, halfwidth);
    Ok(GaussianFit {
        sigma,
        halfwidth,
        order,
        variant: FitVariant::RaisedCosine,
        expansion: truncated.expansion,
        sup_error,
        truncated_terms: truncated.dropped,
        truncation_deviation: truncated.deviation_bound,
        order_cap_exceeded: order > DEFAULT_ORDER_CAP,
    })
}

/// Polynomial counterpart of [`fit_gaussian_raised_cosine_forced`].
pub fn fit_gaussian_polynomial_forced(
    sigma: f64,
    halfwidth: f64,
    epsilon: f64,
    order: u32,
) -> Result<GaussianFit, KernelError> {
    check_fit_args(sigma, halfwidth, epsilon)?;
    let order = order.max(1);
    let scale = sigma * (2.0 * order as f64).sqrt();
    let full = polynomial_scaled(order, scale, halfwidth);
    let truncated = truncate_expansion(&full, epsilon)?;
    let sup_error = sup_error_against_gaussian(&truncated.expansion, sigma, halfwidth);
    Ok(GaussianFit {
        sigma,
        halfwidth,
        order,
        variant: FitVariant::Polynomial,
        expansion: truncated.expansion,
        sup_error,
        truncated_terms: truncated.dropped,
        truncation_deviation: truncated.deviation_bound,
        order_cap_exceeded: order > DEFAULT_ORDER_CAP,
    })
}
