//! Edge-preserving bilateral filtering.
//!
//! The shiftable path expands both kernels, turning the filter into moving
//! sums of M·N basis images: per-pixel cost independent of the window radius,
//! linear in the number of basis pairs.

use rayon::prelude::*;

use super::{FilterError, DEFAULT_ETA_FLOOR};
use crate::buffer::ImageBuffer;
use crate::kernel::{ShiftableExpansion1D, SpatialExpansion};
use crate::moving_sum::moving_sum_stack;

/// Kernels and window for a bilateral run. The window radius must not exceed
/// the spatial kernel support, and the range expansion's half-width must
/// cover the input intensity span.
#[derive(Debug, Clone)]
pub struct BilateralConfig {
    pub spatial: SpatialExpansion,
    pub range: ShiftableExpansion1D,
    /// Window radius T in pixels.
    pub radius: usize,
    /// Relative denominator guard; see [`DEFAULT_ETA_FLOOR`].
    pub eta_floor: f64,
}

impl BilateralConfig {
    pub fn new(spatial: SpatialExpansion, range: ShiftableExpansion1D, radius: usize) -> Self {
        Self {
            spatial,
            range,
            radius,
            eta_floor: DEFAULT_ETA_FLOOR,
        }
    }

    /// Box spatial window of the given radius.
    pub fn with_box_spatial(range: ShiftableExpansion1D, radius: usize) -> Self {
        Self::new(SpatialExpansion::box_window(), range, radius)
    }

    fn validate_radius(&self) -> Result<(), FilterError> {
        let support = self.spatial.support_halfwidth();
        if (self.radius as f64) > support {
            return Err(FilterError::WindowExceedsSupport {
                radius: self.radius,
                support,
            });
        }
        Ok(())
    }

    fn validate_span(&self, f: &ImageBuffer) -> Result<(), FilterError> {
        let (min, max) = f.min_max();
        let span = max - min;
        if self.range.halfwidth() < span {
            return Err(FilterError::RangeHalfwidthTooSmall {
                halfwidth: self.range.halfwidth(),
                span,
            });
        }
        Ok(())
    }
}

/// The M·N auxiliary images of the shiftable reduction, indexed
/// `m * range_terms + n` with the spatial index m outermost.
#[derive(Debug, Clone)]
pub struct BasisImageStack {
    /// a_mn(x) = c_m(x) · d_n(f(x))
    pub coeff: Vec<ImageBuffer>,
    /// g_mn(x) = φ_m(x) · ψ_n(f(x)) · f(x)
    pub numerator: Vec<ImageBuffer>,
    /// h_mn(x) = φ_m(x) · ψ_n(f(x))
    pub denominator: Vec<ImageBuffer>,
    pub spatial_terms: usize,
    pub range_terms: usize,
}

/// One image per expansion term, holding that term's shift coefficient at
/// each pixel's intensity. Evaluated pixel-major so each pixel derives the
/// whole coefficient vector at once.
fn coefficient_images(range: &ShiftableExpansion1D, f: &ImageBuffer) -> Vec<ImageBuffer> {
    let (w, h) = (f.width(), f.height());
    let terms = range.order();
    let mut flat = vec![0.0f64; w * h * terms];
    flat.par_chunks_mut(terms)
        .zip(f.as_slice().par_iter())
        .for_each(|(out, &v)| range.coeffs_into(v, out));
    (0..terms)
        .map(|n| {
            let data = flat.iter().skip(n).step_by(terms).copied().collect();
            ImageBuffer::from_vec_unchecked(w, h, data)
        })
        .collect()
}

/// Step 1 of the shiftable reduction: pointwise transforms of the input into
/// the coefficient, numerator and denominator stacks.
pub fn build_basis_stack(
    f: &ImageBuffer,
    config: &BilateralConfig,
) -> Result<BasisImageStack, FilterError> {
    config.validate_radius()?;
    config.validate_span(f)?;
    let (w, h) = (f.width(), f.height());
    let spatial_terms = config.spatial.term_count();
    let range_terms = config.range.order();

    let spatial_basis = config.spatial.basis_images(w, h);
    let spatial_coeff = config.spatial.coeff_images(w, h);

    // Range basis and coefficients are both functions of the pixel intensity.
    let range = &config.range;
    let range_basis: Vec<ImageBuffer> = (0..range_terms)
        .into_par_iter()
        .map(|n| f.map(|v| range.basis_value(n, v)))
        .collect();
    let range_coeff = coefficient_images(range, f);

    let pairs: Vec<(usize, usize)> = (0..spatial_terms)
        .flat_map(|m| (0..range_terms).map(move |n| (m, n)))
        .collect();

    let coeff: Vec<ImageBuffer> = pairs
        .par_iter()
        .map(|&(m, n)| spatial_coeff[m].pointwise_mul(&range_coeff[n]))
        .collect();
    let denominator: Vec<ImageBuffer> = pairs
        .par_iter()
        .map(|&(m, n)| spatial_basis[m].pointwise_mul(&range_basis[n]))
        .collect();
    let numerator: Vec<ImageBuffer> = denominator
        .par_iter()
        .map(|h_mn| h_mn.pointwise_mul(f))
        .collect();

    Ok(BasisImageStack {
        coeff,
        numerator,
        denominator,
        spatial_terms,
        range_terms,
    })
}

/// Constant-time bilateral filtering: builds the basis stack, moving-sums it,
/// and recombines per pixel (range index innermost, spatial index outermost).
pub fn bilateral_filter_shiftable(
    f: &ImageBuffer,
    config: &BilateralConfig,
) -> Result<ImageBuffer, FilterError> {
    let stack = build_basis_stack(f, config)?;
    let sum_num = moving_sum_stack(&stack.numerator, config.radius);
    let sum_den = moving_sum_stack(&stack.denominator, config.radius);

    let (w, h) = (f.width(), f.height());
    let mut num = vec![0.0f64; w * h];
    let mut den = vec![0.0f64; w * h];
    let mut abs_coeff = vec![0.0f64; w * h];
    for idx in 0..stack.coeff.len() {
        let a = stack.coeff[idx].as_slice();
        let g = sum_num[idx].as_slice();
        let hh = sum_den[idx].as_slice();
        for i in 0..w * h {
            num[i] += a[i] * g[i];
            den[i] += a[i] * hh[i];
            abs_coeff[i] += a[i].abs();
        }
    }

    let src = f.as_slice();
    let eta = config.eta_floor;
    let out = (0..w * h)
        .map(|i| {
            if den[i].abs() <= eta * abs_coeff[i] {
                src[i]
            } else {
                num[i] / den[i]
            }
        })
        .collect();
    Ok(ImageBuffer::from_vec_unchecked(w, h, out))
}

/// Brute-force bilateral filtering over clipped windows; the oracle for the
/// shiftable path. Kernels are evaluated in closed form.
pub fn bilateral_filter_direct(
    f: &ImageBuffer,
    config: &BilateralConfig,
) -> Result<ImageBuffer, FilterError> {
    config.validate_radius()?;
    let (w, h) = (f.width(), f.height());
    let r = config.radius as isize;
    let side = 2 * config.radius + 1;
    let mut spatial_weights = Vec::with_capacity(side * side);
    for dy in -r..=r {
        for dx in -r..=r {
            spatial_weights.push(config.spatial.kernel_value(dx as f64, dy as f64));
        }
    }

    let range = &config.range;
    let eta = config.eta_floor;
    let mut out = vec![0.0f64; w * h];
    out.par_chunks_mut(w).zip(0..h).for_each(|(out_row, row)| {
        let row = row as isize;
        for (col, slot) in out_row.iter_mut().enumerate() {
            let col = col as isize;
            let center = f.get(row as usize, col as usize);
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
                    let neighbor = f.get(y as usize, x as usize);
                    let weight = spatial_weights[((dy + r) as usize) * side + (dx + r) as usize]
                        * range.kernel_value(neighbor - center);
                    num += weight * neighbor;
                    den += weight;
                    abs_weight += weight.abs();
                }
            }
            *slot = if den.abs() <= eta * abs_weight {
                center
            } else {
                num / den
            };
        }
    });
    Ok(ImageBuffer::from_vec_unchecked(w, h, out))
}
