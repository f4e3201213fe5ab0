//! Row-major grayscale image buffer holding double-precision samples.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BufferError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("data length {len} does not match {width}x{height}")]
    LengthMismatch {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),
}

/// W×H grid of f64 samples; index (row, col) maps to `data[row * width + col]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImageBuffer {
    /// Zero-filled buffer.
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    /// Constant-filled buffer.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Builds a buffer from row-major samples, rejecting size mismatches and
    /// non-finite values.
    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Result<Self, BufferError> {
        if width == 0 || height == 0 {
            return Err(BufferError::EmptyDimensions { width, height });
        }
        if data.len() != width * height {
            return Err(BufferError::LengthMismatch {
                width,
                height,
                len: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(BufferError::NonFiniteSample(i));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Internal constructor for values produced by finite arithmetic.
    pub(crate) fn from_vec_unchecked(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    #[must_use]
    pub fn width(&self) -> usize {
        self.width
    }

    #[must_use]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.width + col] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    /// (min, max) over all samples.
    pub fn min_max(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in &self.data {
            min = min.min(v);
            max = max.max(v);
        }
        (min, max)
    }

    /// New buffer with the same dimensions, filled per pixel from `f(value)`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise product of two same-sized buffers.
    pub fn pointwise_mul(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width);
        assert_eq!(self.height, other.height);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .collect();
        Self {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

/// Largest per-pixel relative deviation of `a` from the reference `b`.
///
/// Near-zero reference pixels fall back to absolute deviation.
pub fn max_relative_deviation(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
    assert_eq!(a.width, b.width);
    assert_eq!(a.height, b.height);
    a.data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| (x - y).abs() / y.abs().max(1e-12))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_validates() {
        assert!(ImageBuffer::from_vec(2, 2, vec![0.0; 4]).is_ok());
        assert_eq!(
            ImageBuffer::from_vec(2, 2, vec![0.0; 3]),
            Err(BufferError::LengthMismatch {
                width: 2,
                height: 2,
                len: 3
            })
        );
        assert_eq!(
            ImageBuffer::from_vec(0, 2, vec![]),
            Err(BufferError::EmptyDimensions {
                width: 0,
                height: 2
            })
        );
        assert_eq!(
            ImageBuffer::from_vec(2, 1, vec![1.0, f64::NAN]),
            Err(BufferError::NonFiniteSample(1))
        );
    }

    #[test]
    fn row_major_indexing() {
        let img = ImageBuffer::from_vec(3, 2, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(img.get(0, 2), 2.0);
        assert_eq!(img.get(1, 0), 3.0);
        assert_eq!(img.row(1), &[3.0, 4.0, 5.0]);
    }

    #[test]
    fn relative_deviation_guards_near_zero() {
        let a = ImageBuffer::from_vec(1, 1, vec![0.0]).unwrap();
        let b = ImageBuffer::from_vec(1, 1, vec![0.0]).unwrap();
        assert_eq!(max_relative_deviation(&a, &b), 0.0);
    }
}
