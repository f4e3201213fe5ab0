//! Linear neighborhood smoothing with a spatial kernel.

use rayon::prelude::*;

use super::{FilterError, DEFAULT_ETA_FLOOR};
use crate::buffer::ImageBuffer;
use crate::kernel::{KernelSpec, SpatialExpansion};
use crate::moving_sum::moving_sum_stack;

/// Brute-force window evaluation: at every pixel, the kernel-weighted mean of
/// the clipped window. Serves as the oracle for the shiftable path.
pub fn spatial_filter_direct(
    f: &ImageBuffer,
    kernel: &KernelSpec,
    radius: usize,
) -> Result<ImageBuffer, FilterError> {
    let support = kernel.domain_halfwidth();
    if (radius as f64) > support {
        return Err(FilterError::WindowExceedsSupport { radius, support });
    }
    let weights = window_weights(kernel, radius)?;
    let (w, h) = (f.width(), f.height());
    let r = radius as isize;
    let side = 2 * radius + 1;

    let mut out = vec![0.0f64; w * h];
    out.par_chunks_mut(w).zip(0..h).for_each(|(out_row, row)| {
        let row = row as isize;
        for (col, slot) in out_row.iter_mut().enumerate() {
            let col = col as isize;
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
                    let weight =
                        weights[((dy + r) as usize) * side + (dx + r) as usize];
                    num += weight * f.get(y as usize, x as usize);
                    den += weight;
                    abs_weight += weight.abs();
                }
            }
            *slot = if den.abs() <= DEFAULT_ETA_FLOOR * abs_weight {
                f.get(row as usize, col as usize)
            } else {
                num / den
            };
        }
    });
    Ok(ImageBuffer::from_vec_unchecked(w, h, out))
}

fn window_weights(kernel: &KernelSpec, radius: usize) -> Result<Vec<f64>, FilterError> {
    let r = radius as isize;
    let side = 2 * radius + 1;
    let mut weights = Vec::with_capacity(side * side);
    for dy in -r..=r {
        for dx in -r..=r {
            weights.push(kernel.evaluate_2d(dx as f64, dy as f64)?);
        }
    }
    Ok(weights)
}

/// Constant-time spatial filtering: moving sums of the basis images
/// recombined with the per-pixel coefficients. Per-pixel cost is independent
/// of the radius and linear in the number of basis functions.
pub fn spatial_filter_shiftable(
    f: &ImageBuffer,
    kernel: &SpatialExpansion,
    radius: usize,
) -> Result<ImageBuffer, FilterError> {
    let support = kernel.support_halfwidth();
    if (radius as f64) > support {
        return Err(FilterError::WindowExceedsSupport { radius, support });
    }
    let (w, h) = (f.width(), f.height());

    let basis = kernel.basis_images(w, h);
    let coeff = kernel.coeff_images(w, h);
    let weighted: Vec<ImageBuffer> = basis.par_iter().map(|b| b.pointwise_mul(f)).collect();
    let sum_fb = moving_sum_stack(&weighted, radius);
    let sum_b = moving_sum_stack(&basis, radius);

    let mut num = vec![0.0f64; w * h];
    let mut den = vec![0.0f64; w * h];
    let mut abs_coeff = vec![0.0f64; w * h];
    for m in 0..kernel.term_count() {
        let c = coeff[m].as_slice();
        let gn = sum_fb[m].as_slice();
        let gh = sum_b[m].as_slice();
        for i in 0..w * h {
            num[i] += c[i] * gn[i];
            den[i] += c[i] * gh[i];
            abs_coeff[i] += c[i].abs();
        }
    }

    let src = f.as_slice();
    let out = (0..w * h)
        .map(|i| {
            if den[i].abs() <= DEFAULT_ETA_FLOOR * abs_coeff[i] {
                src[i]
            } else {
                num[i] / den[i]
            }
        })
        .collect();
    Ok(ImageBuffer::from_vec_unchecked(w, h, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buffer::max_relative_deviation;
    use crate::moving_sum::moving_sum;
    use crate::test_util::random_image;

    fn separable_cosine(order: u32, halfwidth: f64) -> (KernelSpec, SpatialExpansion) {
        let spec = KernelSpec::separable_square(
            KernelSpec::raised_cosine(order, halfwidth).unwrap(),
        )
        .unwrap();
        let exp = spec.spatial_expansion().unwrap();
        (spec, exp)
    }

    #[test]
    fn constant_image_is_fixed() {
        let f = ImageBuffer::filled(16, 16, 42.0);
        let (spec, exp) = separable_cosine(4, 4.0);
        let direct = spatial_filter_direct(&f, &spec, 4).unwrap();
        let fast = spatial_filter_shiftable(&f, &exp, 4).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                assert!((direct.get(i, j) - 42.0).abs() < 1e-12);
                assert!((fast.get(i, j) - 42.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn impulse_response_is_the_normalized_kernel() {
        let mut f = ImageBuffer::new(17, 17);
        f.set(8, 8, 1.0);
        let spec = KernelSpec::separable_square(KernelSpec::raised_cosine(2, 3.0).unwrap())
            .unwrap();
        let out = spatial_filter_direct(&f, &spec, 3).unwrap();
        // Away from the border, output(x) = k(x - center) / Σ window weights.
        let mut total = 0.0;
        for dy in -3i32..=3 {
            for dx in -3i32..=3 {
                total += spec.evaluate_2d(dx as f64, dy as f64).unwrap();
            }
        }
        for dy in -3i32..=3 {
            for dx in -3i32..=3 {
                let expected = spec.evaluate_2d(dx as f64, dy as f64).unwrap() / total;
                let got = out.get((8 + dy) as usize, (8 + dx) as usize);
                assert!(
                    (got - expected).abs() < 1e-12,
                    "impulse at ({dx},{dy}): {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn shiftable_matches_direct_on_random_images() {
        let (spec, exp) = separable_cosine(4, 4.0);
        for seed in 0..3 {
            let f = random_image(32, 32, 900 + seed);
            let direct = spatial_filter_direct(&f, &spec, 4).unwrap();
            let fast = spatial_filter_shiftable(&f, &exp, 4).unwrap();
            let dev = max_relative_deviation(&fast, &direct);
            assert!(dev < 1e-8, "seed {seed}: deviation {dev}");
        }
    }

    #[test]
    fn order_zero_reduces_to_the_moving_average() {
        let f = random_image(24, 24, 55);
        let radius = 3;
        let exp = SpatialExpansion::box_window();
        let out = spatial_filter_shiftable(&f, &exp, radius).unwrap();
        let num = moving_sum(&f, radius);
        let den = moving_sum(&ImageBuffer::filled(24, 24, 1.0), radius);
        for i in 0..24 {
            for j in 0..24 {
                let want = num.get(i, j) / den.get(i, j);
                let got = out.get(i, j);
                assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
            }
        }

        // Same through an order-0 separable expansion.
        let (_, exp0) = separable_cosine(0, radius as f64);
        let out0 = spatial_filter_shiftable(&f, &exp0, radius).unwrap();
        assert!(max_relative_deviation(&out0, &out) < 1e-12);
    }

    #[test]
    fn window_larger_than_support_is_rejected() {
        let f = random_image(8, 8, 1);
        let (spec, exp) = separable_cosine(2, 3.0);
        assert!(matches!(
            spatial_filter_direct(&f, &spec, 4),
            Err(FilterError::WindowExceedsSupport { .. })
        ));
        assert!(matches!(
            spatial_filter_shiftable(&f, &exp, 4),
            Err(FilterError::WindowExceedsSupport { .. })
        ));
    }

    #[test]
    fn polynomial_spatial_kernel_matches_on_small_images() {
        // Monomial bases at absolute coordinates are only well conditioned
        // for small images and orders; this pins the regime that works.
        let f = random_image(16, 16, 4242);
        let spec =
            KernelSpec::separable_square(KernelSpec::poly_window(2, 4.0).unwrap()).unwrap();
        let exp = spec.spatial_expansion().unwrap();
        let direct = spatial_filter_direct(&f, &spec, 4).unwrap();
        let fast = spatial_filter_shiftable(&f, &exp, 4).unwrap();
        let dev = max_relative_deviation(&fast, &direct);
        assert!(dev < 1e-8, "deviation {dev}");
    }

    #[test]
    fn directional_kernel_filters_match() {
        let f = random_image(24, 24, 77);
        let spec = crate::kernel::directional_kernel(4, 5.0).unwrap();
        let exp = spec.spatial_expansion().unwrap();
        let direct = spatial_filter_direct(&f, &spec, 5).unwrap();
        let fast = spatial_filter_shiftable(&f, &exp, 5).unwrap();
        assert!(max_relative_deviation(&fast, &direct) < 1e-8);
    }

    #[test]
    fn mirror_symmetry_is_preserved() {
        // Mirror-symmetric input + symmetric kernel => mirror-symmetric output.
        let half = random_image(8, 16, 31);
        let mut data = Vec::with_capacity(16 * 16);
        for row in 0..16 {
            let mut left: Vec<f64> = (0..8).map(|c| half.get(row, c)).collect();
            let mut right = left.clone();
            right.reverse();
            data.append(&mut left);
            data.append(&mut right);
        }
        let f = ImageBuffer::from_vec(16, 16, data).unwrap();
        let (_, exp) = separable_cosine(3, 3.0);
        let out = spatial_filter_shiftable(&f, &exp, 3).unwrap();
        for row in 0..16 {
            for col in 0..16 {
                let mirrored = out.get(row, 15 - col);
                let v = out.get(row, col);
                assert!(
                    (v - mirrored).abs() <= 1e-10 * v.abs().max(1.0),
                    "mirror mismatch at ({row},{col})"
                );
            }
        }
    }
}
