//! Two-dimensional shiftable expansions for spatial kernels.
//!
//! The filter algorithms consume spatial kernels through this type: it can
//! render the basis functions and the shift coefficients as whole images
//! (evaluated at absolute pixel coordinates; the shiftability identity makes
//! the origin choice irrelevant) and can evaluate the kernel in closed form
//! for the brute-force oracles.

use std::f64::consts::PI;

use super::basis::ShiftableExpansion1D;
use super::spec::KernelSpec;
use super::KernelError;
use crate::buffer::ImageBuffer;

/// A 2-D kernel in shiftable form.
#[derive(Debug, Clone)]
pub enum SpatialExpansion {
    /// Constant weight 1 over the window: the box kernel, a single-term
    /// expansion with unbounded support.
    BoxWindow,
    /// Tensor product of two 1-D expansions; term (i, j) is
    /// `basis_x[i](x) · basis_y[j](y)` with i iterating over the x axis
    /// outermost.
    Separable {
        x: ShiftableExpansion1D,
        y: ShiftableExpansion1D,
    },
    /// Product of `directions` rotated cosine ridges at the base frequency
    /// π/2T; the 2^directions basis terms are the sign patterns of the
    /// per-ridge angle-addition expansion.
    Directional {
        directions: u32,
        halfwidth: f64,
    },
}

impl SpatialExpansion {
    /// Box kernel: order-0 expansion, constant 1.
    pub fn box_window() -> Self {
        SpatialExpansion::BoxWindow
    }

    pub fn separable(x: ShiftableExpansion1D, y: ShiftableExpansion1D) -> Self {
        SpatialExpansion::Separable { x, y }
    }

    /// Number of basis images the filter will carry (M).
    #[must_use]
    pub fn term_count(&self) -> usize {
        match self {
            SpatialExpansion::BoxWindow => 1,
            SpatialExpansion::Separable { x, y } => x.order() * y.order(),
            SpatialExpansion::Directional { directions, .. } => 1usize << directions,
        }
    }

    /// Half-width of the kernel support; window radii must not exceed it.
    #[must_use]
    pub fn support_halfwidth(&self) -> f64 {
        match self {
            SpatialExpansion::BoxWindow => f64::INFINITY,
            SpatialExpansion::Separable { x, y } => x.halfwidth().min(y.halfwidth()),
            SpatialExpansion::Directional { halfwidth, .. } => *halfwidth,
        }
    }

    /// Closed-form kernel value at a displacement.
    pub fn kernel_value(&self, dx: f64, dy: f64) -> f64 {
        match self {
            SpatialExpansion::BoxWindow => 1.0,
            SpatialExpansion::Separable { x, y } => x.kernel_value(dx) * y.kernel_value(dy),
            SpatialExpansion::Directional {
                directions,
                halfwidth,
            } => {
                let gamma = PI / (2.0 * halfwidth);
                let mut v = 1.0;
                for k in 0..*directions {
                    let theta = (k as f64) * PI / (*directions as f64);
                    v *= (gamma * (dx * theta.cos() + dy * theta.sin())).cos();
                }
                v
            }
        }
    }

    /// Renders every basis function at absolute pixel coordinates
    /// (x = column, y = row).
    pub fn basis_images(&self, width: usize, height: usize) -> Vec<ImageBuffer> {
        self.render(width, height, RenderKind::Basis)
    }

    /// Renders the shift coefficients c_m(x) at absolute pixel coordinates.
    pub fn coeff_images(&self, width: usize, height: usize) -> Vec<ImageBuffer> {
        self.render(width, height, RenderKind::Coeff)
    }

    fn render(&self, width: usize, height: usize, kind: RenderKind) -> Vec<ImageBuffer> {
        match self {
            SpatialExpansion::BoxWindow => vec![ImageBuffer::filled(width, height, 1.0)],
            SpatialExpansion::Separable { x, y } => {
                // Per-axis profiles, then outer products.
                let col_profiles = axis_profiles(x, width, kind);
                let row_profiles = axis_profiles(y, height, kind);
                let mut images = Vec::with_capacity(x.order() * y.order());
                for cols in &col_profiles {
                    for rows in &row_profiles {
                        let mut data = Vec::with_capacity(width * height);
                        for &ry in rows {
                            data.extend(cols.iter().map(|&cx| cx * ry));
                        }
                        images.push(ImageBuffer::from_vec_unchecked(width, height, data));
                    }
                }
                images
            }
            SpatialExpansion::Directional {
                directions,
                halfwidth,
            } => {
                // For the directional product the coefficients equal the basis
                // values (unit weights), so both renders coincide.
                let n = *directions as usize;
                let gamma = PI / (2.0 * halfwidth);
                let mut cos_imgs = Vec::with_capacity(n);
                let mut sin_imgs = Vec::with_capacity(n);
                for k in 0..n {
                    let theta = (k as f64) * PI / (n as f64);
                    let (ct, st) = (theta.cos(), theta.sin());
                    let mut cos_data = Vec::with_capacity(width * height);
                    let mut sin_data = Vec::with_capacity(width * height);
                    for row in 0..height {
                        for col in 0..width {
                            let angle = gamma * ((col as f64) * ct + (row as f64) * st);
                            cos_data.push(angle.cos());
                            sin_data.push(angle.sin());
                        }
                    }
                    cos_imgs.push(cos_data);
                    sin_imgs.push(sin_data);
                }
                let mut images = Vec::with_capacity(1 << n);
                for mask in 0u32..(1u32 << n) {
                    let mut data = vec![1.0; width * height];
                    for (k, slot) in (0..n).map(|k| (k, mask >> k & 1 == 1)) {
                        let src = if slot { &sin_imgs[k] } else { &cos_imgs[k] };
                        for (d, s) in data.iter_mut().zip(src) {
                            *d *= s;
                        }
                    }
                    images.push(ImageBuffer::from_vec_unchecked(width, height, data));
                }
                images
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum RenderKind {
    Basis,
    Coeff,
}

fn axis_profiles(exp: &ShiftableExpansion1D, len: usize, kind: RenderKind) -> Vec<Vec<f64>> {
    (0..exp.order())
        .map(|i| {
            (0..len)
                .map(|p| match kind {
                    RenderKind::Basis => exp.basis_value(i, p as f64),
                    RenderKind::Coeff => exp.coeff_value(i, p as f64),
                })
                .collect()
        })
        .collect()
}

impl KernelSpec {
    /// Shiftable form of a 2-D kernel spec.
    pub fn spatial_expansion(&self) -> Result<SpatialExpansion, KernelError> {
        match self {
            KernelSpec::Separable2D { x, y } => Ok(SpatialExpansion::Separable {
                x: axis_expansion(x)?,
                y: axis_expansion(y)?,
            }),
            KernelSpec::Directional2D { order, halfwidth } => Ok(SpatialExpansion::Directional {
                directions: *order,
                halfwidth: *halfwidth,
            }),
            _ => Err(KernelError::DimensionMismatch {
                point: 2,
                kernel: 1,
            }),
        }
    }
}

fn axis_expansion(spec: &KernelSpec) -> Result<ShiftableExpansion1D, KernelError> {
    match *spec {
        KernelSpec::RaisedCosine { order, halfwidth } => {
            super::basis::raised_cosine_expansion(order, halfwidth)
        }
        KernelSpec::PolyWindow { order, halfwidth } => {
            super::basis::polynomial_expansion(order, halfwidth)
        }
        _ => Err(KernelError::NonSeparableAxis),
    }
}
