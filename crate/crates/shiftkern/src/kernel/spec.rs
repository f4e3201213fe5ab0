//! Declarative kernel descriptions and closed-form evaluation.

use std::f64::consts::PI;

use super::KernelError;

/// A 1-D or 2-D kernel in closed form.
///
/// `Directional2D` is the product of `order` one-dimensional raised cosines
/// whose ridge directions are spread uniformly over the half circle,
/// θ_k = (k-1)π/order. For order 4 this is the four-cosine kernel
/// q₁(x₁)·q₁((x₁+x₂)/√2)·q₁(x₂)·q₁((x₁-x₂)/√2).
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// `cos(π t / 2T)^order` on [-T, T].
    RaisedCosine { order: u32, halfwidth: f64 },
    /// `(1 - t²/T²)^order` on [-T, T].
    PolyWindow { order: u32, halfwidth: f64 },
    /// Product of two 1-D kernels, one per axis.
    Separable2D {
        x: Box<KernelSpec>,
        y: Box<KernelSpec>,
    },
    /// Product of `order` rotated raised cosines on [-T, T]².
    Directional2D { order: u32, halfwidth: f64 },
}

fn check_halfwidth(halfwidth: f64) -> Result<(), KernelError> {
    if halfwidth > 0.0 && halfwidth.is_finite() {
        Ok(())
    } else {
        Err(KernelError::InvalidHalfwidth(halfwidth))
    }
}

impl KernelSpec {
    pub fn raised_cosine(order: u32, halfwidth: f64) -> Result<Self, KernelError> {
        check_halfwidth(halfwidth)?;
        Ok(KernelSpec::RaisedCosine { order, halfwidth })
    }

    pub fn poly_window(order: u32, halfwidth: f64) -> Result<Self, KernelError> {
        check_halfwidth(halfwidth)?;
        Ok(KernelSpec::PolyWindow { order, halfwidth })
    }

    /// Separable 2-D product; both axes must be 1-D kernels.
    pub fn separable(x: KernelSpec, y: KernelSpec) -> Result<Self, KernelError> {
        if x.dimensions() != 1 || y.dimensions() != 1 {
            return Err(KernelError::NonSeparableAxis);
        }
        Ok(KernelSpec::Separable2D {
            x: Box::new(x),
            y: Box::new(y),
        })
    }

    /// Separable self-product of a 1-D kernel.
    pub fn separable_square(axis: KernelSpec) -> Result<Self, KernelError> {
        let other = axis.clone();
        Self::separable(axis, other)
    }

    #[must_use]
    pub fn dimensions(&self) -> usize {
        match self {
            KernelSpec::RaisedCosine { .. } | KernelSpec::PolyWindow { .. } => 1,
            KernelSpec::Separable2D { .. } | KernelSpec::Directional2D { .. } => 2,
        }
    }

    /// Half-width of the kernel's reference square (largest axis half-width
    /// for separable products).
    #[must_use]
    pub fn domain_halfwidth(&self) -> f64 {
        match self {
            KernelSpec::RaisedCosine { halfwidth, .. }
            | KernelSpec::PolyWindow { halfwidth, .. }
            | KernelSpec::Directional2D { halfwidth, .. } => *halfwidth,
            KernelSpec::Separable2D { x, y } => x.domain_halfwidth().max(y.domain_halfwidth()),
        }
    }

    /// Closed-form evaluation of a 1-D kernel; points outside [-T, T] are an
    /// error.
    pub fn evaluate_1d(&self, t: f64) -> Result<f64, KernelError> {
        match *self {
            KernelSpec::RaisedCosine { order, halfwidth } => {
                if t.abs() > halfwidth {
                    return Err(KernelError::OutOfDomain(t, halfwidth));
                }
                Ok((PI * t / (2.0 * halfwidth)).cos().powi(order as i32))
            }
            KernelSpec::PolyWindow { order, halfwidth } => {
                if t.abs() > halfwidth {
                    return Err(KernelError::OutOfDomain(t, halfwidth));
                }
                let u = t / halfwidth;
                Ok((1.0 - u * u).powi(order as i32))
            }
            _ => Err(KernelError::DimensionMismatch {
                point: 1,
                kernel: 2,
            }),
        }
    }

    /// Closed-form evaluation of a 2-D kernel.
    ///
    /// Separable products enforce their per-axis domains; the directional
    /// kernel evaluates its cosines with their natural extension, so rotated
    /// arguments may exceed the half-width (this is what produces the
    /// documented corner overshoot).
    pub fn evaluate_2d(&self, x1: f64, x2: f64) -> Result<f64, KernelError> {
        match self {
            KernelSpec::Separable2D { x, y } => Ok(x.evaluate_1d(x1)? * y.evaluate_1d(x2)?),
            KernelSpec::Directional2D { order, halfwidth } => {
                let gamma = PI / (2.0 * halfwidth);
                let n = *order;
                let mut value = 1.0;
                for k in 0..n {
                    let theta = (k as f64) * PI / (n as f64);
                    let r = x1 * theta.cos() + x2 * theta.sin();
                    value *= (gamma * r).cos();
                }
                Ok(value)
            }
            _ => Err(KernelError::DimensionMismatch {
                point: 2,
                kernel: 1,
            }),
        }
    }
}

/// Builds the uniformly-rotated cosine-product kernel of a given direction
/// count on [-T, T]².
pub fn directional_kernel(order: u32, halfwidth: f64) -> Result<KernelSpec, KernelError> {
    if order == 0 {
        return Err(KernelError::InvalidDirectionCount);
    }
    check_halfwidth(halfwidth)?;
    Ok(KernelSpec::Directional2D { order, halfwidth })
}
