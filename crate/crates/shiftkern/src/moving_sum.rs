//! Sliding-window sums over square windows, with per-pixel cost independent
//! of the window radius.
//!
//! `moving_sum(F, T)` produces, at every pixel, the unnormalized sum of F
//! over the window [-T, T]² centered there. Windows are clipped at the image
//! border; pixels outside contribute nothing ([`BoundaryPolicy::ZeroOutside`]).
//! The sum runs as two separable passes, each a recursion with one add and
//! one subtract per pixel.

use rayon::prelude::*;

use crate::buffer::ImageBuffer;

/// How windows behave at the image border. All filters in this crate are
/// ratios of two stacked moving sums, so clipping self-normalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    #[default]
    ZeroOutside,
}

/// Sum of `f` over the clipped window [-radius, radius]² at every pixel.
///
/// Radii of the image size or larger are allowed; the window then covers the
/// whole image.
pub fn moving_sum(f: &ImageBuffer, radius: usize) -> ImageBuffer {
    if radius == 0 {
        return f.clone();
    }
    let width = f.width();
    let height = f.height();

    // Horizontal pass: per-row sliding sum, re-initialized each row.
    // Kept sequential; concurrency lives at the stack level, where images
    // are independent.
    let mut horizontal = vec![0.0f64; width * height];
    for (row, out_row) in horizontal.chunks_mut(width).enumerate() {
        let src = f.row(row);
        let mut sum = 0.0;
        for value in src.iter().take(radius + 1) {
            sum += value;
        }
        out_row[0] = sum;
        for col in 1..width {
            if col + radius < width {
                sum += src[col + radius];
            }
            if col > radius {
                sum -= src[col - radius - 1];
            }
            out_row[col] = sum;
        }
    }

    // Vertical pass: one running sum per column, re-initialized per column.
    let mut out = vec![0.0f64; width * height];
    let mut column_sums = vec![0.0f64; width];
    for row in 0..height.min(radius + 1) {
        let src = &horizontal[row * width..(row + 1) * width];
        for (acc, v) in column_sums.iter_mut().zip(src) {
            *acc += v;
        }
    }
    out[..width].copy_from_slice(&column_sums);
    for row in 1..height {
        if row + radius < height {
            let src = &horizontal[(row + radius) * width..(row + radius + 1) * width];
            for (acc, v) in column_sums.iter_mut().zip(src) {
                *acc += v;
            }
        }
        if row > radius {
            let src = &horizontal[(row - radius - 1) * width..(row - radius) * width];
            for (acc, v) in column_sums.iter_mut().zip(src) {
                *acc -= v;
            }
        }
        out[row * width..(row + 1) * width].copy_from_slice(&column_sums);
    }

    ImageBuffer::from_vec_unchecked(width, height, out)
}

/// [`moving_sum`] applied to every image of a stack. Images are independent
/// and processed in parallel; the output order matches the input order and
/// the per-image results are identical to the single-image path.
pub fn moving_sum_stack(stack: &[ImageBuffer], radius: usize) -> Vec<ImageBuffer> {
    stack.par_iter().map(|f| moving_sum(f, radius)).collect()
}
