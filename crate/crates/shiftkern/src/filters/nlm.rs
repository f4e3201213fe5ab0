//! Experimental shiftable non-local means.
//!
//! Patch similarity is a p-variate Gaussian weight on the vector of per-offset
//! intensity differences. Approximating that Gaussian by a separable product
//! of per-dimension raised-cosine fits makes the weight shiftable with
//! n^p basis terms (n terms per dimension), so the filter again reduces to
//! moving sums. The n^p growth caps this at small patches and coarse
//! per-dimension orders; the gap between the separable approximation and the
//! exact exponential weight is measured and reported, not assumed.

use rayon::prelude::*;

use super::{FilterError, DEFAULT_ETA_FLOOR, DEFAULT_INTENSITY_HALFWIDTH};
use crate::buffer::ImageBuffer;
use crate::kernel::basis::raised_cosine_scaled;
use crate::kernel::ShiftableExpansion1D;
use crate::moving_sum::moving_sum_stack;
use crate::sampler::SplitMix64;

/// Patch sizes above this are rejected: the basis count n^p becomes
/// impractical.
pub const MAX_PATCH_OFFSETS: usize = 4;
/// Per-dimension order cap; with [`MAX_PATCH_OFFSETS`] the total order stays
/// at or below 625.
pub const MAX_PER_DIM_ORDER: u32 = 5;

/// Parameters of the experimental shiftable non-local means.
#[derive(Debug, Clone)]
pub struct NlmParams {
    /// Patch offsets (column, row); the first must be (0, 0).
    pub offsets: Vec<(i32, i32)>,
    /// Smoothing parameter h of the exponential weight.
    pub smoothing: f64,
    /// Per-offset Gaussian weights g(u_k); positive, one per offset.
    pub patch_weights: Vec<f64>,
    /// Window radius T in pixels.
    pub radius: usize,
    /// Basis terms per patch dimension (n); total order is n^p.
    pub per_dim_order: u32,
    pub eta_floor: f64,
}

impl NlmParams {
    pub fn new(
        offsets: Vec<(i32, i32)>,
        smoothing: f64,
        patch_weights: Vec<f64>,
        radius: usize,
        per_dim_order: u32,
    ) -> Self {
        Self {
            offsets,
            smoothing,
            patch_weights,
            radius,
            per_dim_order,
            eta_floor: DEFAULT_ETA_FLOOR,
        }
    }

    fn validate(&self) -> Result<(), FilterError> {
        if self.offsets.is_empty() {
            return Err(FilterError::EmptyPatch);
        }
        if self.offsets.len() > MAX_PATCH_OFFSETS {
            return Err(FilterError::PatchTooLarge(self.offsets.len()));
        }
        if self.offsets[0] != (0, 0) {
            return Err(FilterError::FirstOffsetNotZero);
        }
        if self.per_dim_order == 0 {
            return Err(FilterError::PerDimOrderZero);
        }
        if self.per_dim_order > MAX_PER_DIM_ORDER {
            return Err(FilterError::PerDimOrderTooLarge(self.per_dim_order));
        }
        if !(self.smoothing > 0.0 && self.smoothing.is_finite()) {
            return Err(FilterError::InvalidSmoothing(self.smoothing));
        }
        if self.patch_weights.len() != self.offsets.len()
            || self
                .patch_weights
                .iter()
                .any(|&g| !(g > 0.0 && g.is_finite()))
        {
            return Err(FilterError::InvalidPatchWeights);
        }
        Ok(())
    }
}

/// Filtered image plus the measured quality of the separable weight
/// approximation.
#[derive(Debug, Clone)]
pub struct NlmOutput {
    pub image: ImageBuffer,
    /// Sup deviation of the separable approximate weight from the exact
    /// exponential weight over sampled difference vectors.
    pub kernel_sup_gap: f64,
}

/// Normalized Gaussian patch weights g(u_k) for a set of offsets.
pub fn gaussian_patch_weights(
    offsets: &[(i32, i32)],
    sigma_patch: f64,
) -> Result<Vec<f64>, FilterError> {
    if !(sigma_patch > 0.0 && sigma_patch.is_finite()) {
        return Err(FilterError::InvalidSmoothing(sigma_patch));
    }
    let raw: Vec<f64> = offsets
        .iter()
        .map(|&(dx, dy)| {
            let r2 = (dx * dx + dy * dy) as f64;
            (-r2 / (2.0 * sigma_patch * sigma_patch)).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|g| g / total).collect())
}

/// Per-dimension raised-cosine fit: the k-th axis of the separable weight
/// targets a Gaussian of variance h²/(2·g_k). The order is fixed by the
/// caller (coarse orders give coarse approximations; the identity between
/// the shiftable and direct paths holds regardless).
pub fn patch_axis_expansion(smoothing: f64, weight: f64, per_dim_order: u32) -> ShiftableExpansion1D {
    let exponent = per_dim_order - 1;
    if exponent == 0 {
        return raised_cosine_scaled(0, 0.0, DEFAULT_INTENSITY_HALFWIDTH);
    }
    let sigma = smoothing / (2.0 * weight).sqrt();
    let base_frequency = 1.0 / (sigma * (exponent as f64).sqrt());
    raised_cosine_scaled(exponent, base_frequency, DEFAULT_INTENSITY_HALFWIDTH)
}

/// Patch image: the input resampled at offset u_k, clamping reads to the
/// border.
fn patch_image(f: &ImageBuffer, offset: (i32, i32)) -> ImageBuffer {
    let (w, h) = (f.width(), f.height());
    let (dx, dy) = offset;
    let mut data = Vec::with_capacity(w * h);
    for row in 0..h as i32 {
        let y = (row + dy).clamp(0, h as i32 - 1) as usize;
        for col in 0..w as i32 {
            let x = (col + dx).clamp(0, w as i32 - 1) as usize;
            data.push(f.get(y, x));
        }
    }
    ImageBuffer::from_vec_unchecked(w, h, data)
}

fn axis_expansions(params: &NlmParams) -> Vec<ShiftableExpansion1D> {
    params
        .patch_weights
        .iter()
        .map(|&g| patch_axis_expansion(params.smoothing, g, params.per_dim_order))
        .collect()
}

/// Sup gap between the separable approximate weight and the exact
/// exponential on a fixed pseudorandom sample of difference vectors.
fn kernel_gap(params: &NlmParams, axes: &[ShiftableExpansion1D]) -> f64 {
    let p = params.offsets.len();
    let h2 = params.smoothing * params.smoothing;
    let mut rng = SplitMix64::new(0x5EED);
    let mut sup = 0.0f64;
    let mut diffs = vec![0.0f64; p];
    for _ in 0..4096 {
        for d in diffs.iter_mut() {
            *d = rng.uniform(
                -DEFAULT_INTENSITY_HALFWIDTH,
                DEFAULT_INTENSITY_HALFWIDTH,
            );
        }
        let mut approx = 1.0;
        let mut exact_exponent = 0.0;
        for k in 0..p {
            approx *= axes[k].kernel_value(diffs[k]);
            exact_exponent += params.patch_weights[k] * diffs[k] * diffs[k];
        }
        let exact = (-exact_exponent / h2).exp();
        sup = sup.max((approx - exact).abs());
    }
    sup
}

/// Shiftable non-local means: moving sums of the n^p patch-similarity basis
/// images, recombined with per-pixel coefficients.
pub fn nlm_shiftable_experimental(
    f: &ImageBuffer,
    params: &NlmParams,
) -> Result<NlmOutput, FilterError> {
    params.validate()?;
    let (w, h) = (f.width(), f.height());
    let p = params.offsets.len();
    let n = params.per_dim_order as usize;
    let axes = axis_expansions(params);
    let patches: Vec<ImageBuffer> = params
        .offsets
        .iter()
        .map(|&u| patch_image(f, u))
        .collect();

    // Per (dimension, term) basis and coefficient images.
    let per_axis: Vec<(Vec<ImageBuffer>, Vec<ImageBuffer>)> = (0..p)
        .into_par_iter()
        .map(|k| {
            let axis = &axes[k];
            let patch = &patches[k];
            let basis: Vec<ImageBuffer> = (0..n)
                .map(|j| patch.map(|v| axis.basis_value(j, v)))
                .collect();
            let coeff: Vec<ImageBuffer> = (0..n)
                .map(|j| patch.map(|v| axis.coeff_value(j, v)))
                .collect();
            (basis, coeff)
        })
        .collect();

    let term_count = n.pow(p as u32);
    let digits = |term: usize| (0..p).map(move |k| term / n.pow(k as u32) % n);

    let denominator: Vec<ImageBuffer> = (0..term_count)
        .into_par_iter()
        .map(|term| {
            let mut img = ImageBuffer::filled(w, h, 1.0);
            for (k, j) in digits(term).enumerate() {
                img = img.pointwise_mul(&per_axis[k].0[j]);
            }
            img
        })
        .collect();
    let numerator: Vec<ImageBuffer> = denominator
        .par_iter()
        .map(|h_term| h_term.pointwise_mul(f))
        .collect();
    let coeff: Vec<ImageBuffer> = (0..term_count)
        .into_par_iter()
        .map(|term| {
            let mut img = ImageBuffer::filled(w, h, 1.0);
            for (k, j) in digits(term).enumerate() {
                img = img.pointwise_mul(&per_axis[k].1[j]);
            }
            img
        })
        .collect();

    let sum_num = moving_sum_stack(&numerator, params.radius);
    let sum_den = moving_sum_stack(&denominator, params.radius);

    let mut num = vec![0.0f64; w * h];
    let mut den = vec![0.0f64; w * h];
    let mut abs_coeff = vec![0.0f64; w * h];
    for term in 0..term_count {
        let c = coeff[term].as_slice();
        let g = sum_num[term].as_slice();
        let hh = sum_den[term].as_slice();
        for i in 0..w * h {
            num[i] += c[i] * g[i];
            den[i] += c[i] * hh[i];
            abs_coeff[i] += c[i].abs();
        }
    }

    let src = f.as_slice();
    let eta = params.eta_floor;
    let out = (0..w * h)
        .map(|i| {
            if den[i].abs() <= eta * abs_coeff[i] {
                src[i]
            } else {
                num[i] / den[i]
            }
        })
        .collect();

    Ok(NlmOutput {
        image: ImageBuffer::from_vec_unchecked(w, h, out),
        kernel_sup_gap: kernel_gap(params, &axes),
    })
}

/// Brute-force non-local means with the same separable approximate weight;
/// the oracle for the shiftable path. The exact-exponential weight is not
/// used here: algebraic correctness and approximation quality are assessed
/// separately.
pub fn nlm_filter_direct(
    f: &ImageBuffer,
    params: &NlmParams,
) -> Result<ImageBuffer, FilterError> {
    params.validate()?;
    let (w, h) = (f.width(), f.height());
    let p = params.offsets.len();
    let axes = axis_expansions(params);
    let patches: Vec<ImageBuffer> = params
        .offsets
        .iter()
        .map(|&u| patch_image(f, u))
        .collect();

    let r = params.radius as isize;
    let eta = params.eta_floor;
    let mut out = vec![0.0f64; w * h];
    out.par_chunks_mut(w).zip(0..h).for_each(|(out_row, row)| {
        let row = row as isize;
        for (col, slot) in out_row.iter_mut().enumerate() {
            let col = col as isize;
            let center: Vec<f64> = (0..p)
                .map(|k| patches[k].get(row as usize, col as usize))
                .collect();
            let mut num = 0.0;
            let mut den = 0.0;
            let mut abs_weight = 0.0;
            for dy in -r..=r {
                let y = row + dy;
                if y < 0 || y >= h as isize {
                    continue;
                }
                for dx in -r..=r {
                    let x = col + dx;
                    if x < 0 || x >= w as isize {
                        continue;
                    }
                    let mut weight = 1.0;
                    for k in 0..p {
                        let diff = patches[k].get(y as usize, x as usize) - center[k];
                        weight *= axes[k].kernel_value(diff);
                    }
                    num += weight * f.get(y as usize, x as usize);
                    den += weight;
                    abs_weight += weight.abs();
                }
            }
            *slot = if den.abs() <= eta * abs_weight {
                f.get(row as usize, col as usize)
            } else {
                num / den
            };
        }
    });
    Ok(ImageBuffer::from_vec_unchecked(w, h, out))
}
