//! Quality metrics for 2-D kernels: angular anisotropy and the negative
//! corner overshoot of directional products.

use super::spec::KernelSpec;
use super::KernelError;

/// Grid resolution for 2-D kernel metrics (per axis).
pub const METRIC_GRID: usize = 257;
/// Angles sampled per circle by the isotropy metric.
pub const ISOTROPY_ANGLES: usize = 360;

/// [`isotropy_metric`] for an arbitrary 2-D function on [-T, T]².
pub fn isotropy_of(kernel: impl Fn(f64, f64) -> f64, halfwidth: f64) -> f64 {
    let peak = kernel(0.0, 0.0);
    let mut worst = 0.0f64;
    for tenth in 1..=9 {
        let radius = halfwidth * (tenth as f64) / 10.0;
        let mut max = f64::NEG_INFINITY;
        let mut min = f64::INFINITY;
        for step in 0..ISOTROPY_ANGLES {
            let angle = 2.0 * std::f64::consts::PI * (step as f64) / (ISOTROPY_ANGLES as f64);
            let v = kernel(radius * angle.cos(), radius * angle.sin());
            max = max.max(v);
            min = min.min(v);
        }
        worst = worst.max((max - min) / peak);
    }
    worst
}

/// [`corner_overshoot`] for an arbitrary 2-D function on [-T, T]².
pub fn overshoot_of(kernel: impl Fn(f64, f64) -> f64, halfwidth: f64) -> f64 {
    let peak = kernel(0.0, 0.0);
    let last = (METRIC_GRID - 1) as f64;
    let mut min = f64::INFINITY;
    for i in 0..METRIC_GRID {
        let x1 = -halfwidth + 2.0 * halfwidth * (i as f64) / last;
        for j in 0..METRIC_GRID {
            let x2 = -halfwidth + 2.0 * halfwidth * (j as f64) / last;
            let v = kernel(x1, x2);
            if v < min {
                min = v;
            }
        }
    }
    min / peak
}

/// Worst angular spread of kernel values over circles of radius
/// 0.1T … 0.9T sampled at 360 angles, normalized by the kernel peak.
/// Zero for a radial kernel.
pub fn isotropy_metric(spec: &KernelSpec) -> Result<f64, KernelError> {
    if spec.dimensions() != 2 {
        return Err(KernelError::DimensionMismatch {
            point: 2,
            kernel: spec.dimensions(),
        });
    }
    Ok(isotropy_of(
        |x1, x2| spec.evaluate_2d(x1, x2).expect("metric point within domain"),
        spec.domain_halfwidth(),
    ))
}

/// Minimum kernel value over the 257×257 grid on [-T, T]², divided by the
/// peak. Negative exactly when nonnegativity is violated.
pub fn corner_overshoot(spec: &KernelSpec) -> Result<f64, KernelError> {
    if spec.dimensions() != 2 {
        return Err(KernelError::DimensionMismatch {
            point: 2,
            kernel: spec.dimensions(),
        });
    }
    Ok(overshoot_of(
        |x1, x2| spec.evaluate_2d(x1, x2).expect("metric point within domain"),
        spec.domain_halfwidth(),
    ))
}
