//! The `filter` subcommand.

use shiftkern::io::{read_pgm, write_pgm};
use shiftkern::kernel::fit::{
    fit_gaussian_polynomial_forced, fit_gaussian_raised_cosine_forced,
};
use shiftkern::{
    bilateral_filter_direct, bilateral_filter_shiftable, directional_kernel,
    gaussian_patch_weights, max_relative_deviation, nlm_filter_direct,
    nlm_shiftable_experimental, polynomial_expansion, polynomial_min_order,
    raised_cosine_expansion, raised_cosine_min_order, spatial_filter_shiftable, BilateralConfig,
    GaussianFit, ImageBuffer, NlmParams, ShiftableExpansion1D, SpatialExpansion,
    DEFAULT_INTENSITY_HALFWIDTH,
};

use crate::error::CliError;
use crate::{FilterArgs, FilterMode, KernelFamily};

pub fn run(args: &FilterArgs) -> Result<(), CliError> {
    if args.radius < 0 {
        return Err(CliError::Usage("--T must be nonnegative".into()));
    }
    let radius = args.radius as usize;
    warn_if_poly_spatial(args);
    let image = read_pgm(&args.input)?;

    let (output, deviation) = match args.mode {
        FilterMode::Spatial => spatial(args, &image, radius)?,
        FilterMode::Bilateral => bilateral(args, &image, radius)?,
        FilterMode::Nlm => nlm(args, &image, radius)?,
    };
    if let Some(dev) = deviation {
        println!("max relative deviation: {dev:.3e}");
    }
    write_pgm(&output, &args.output, 255)?;
    Ok(())
}

/// Gaussian fit in the requested family, enforcing the validity threshold
/// unless --force.
fn fitted_expansion(
    family: KernelFamily,
    sigma: f64,
    halfwidth: f64,
    truncation: f64,
    forced_order: Option<u32>,
    force: bool,
    label: &str,
) -> Result<GaussianFit, CliError> {
    let min_order = match family {
        KernelFamily::Cosine => raised_cosine_min_order(sigma, halfwidth),
        KernelFamily::Poly => polynomial_min_order(sigma, halfwidth),
        KernelFamily::Directional => {
            return Err(CliError::Usage(
                "directional kernels cannot be Gaussian-fitted per axis".into(),
            ))
        }
    };
    let order = forced_order.unwrap_or(min_order);
    if order < min_order && !force {
        return Err(CliError::Validity(format!(
            "{label} order {order} is below the validity threshold {min_order} \
             (sigma={sigma}, T={halfwidth}); pass --force to accept an invalid kernel"
        )));
    }
    let fit = match family {
        KernelFamily::Cosine => {
            fit_gaussian_raised_cosine_forced(sigma, halfwidth, truncation, order)
        }
        KernelFamily::Poly => fit_gaussian_polynomial_forced(sigma, halfwidth, truncation, order),
        KernelFamily::Directional => unreachable!(),
    }
    .map_err(CliError::from)?;
    eprintln!(
        "{label} fit: {} N={} T={} sup_error={:.3e} terms={} truncated={}",
        fit.variant.name(),
        fit.order,
        fit.halfwidth,
        fit.sup_error,
        fit.expansion.order(),
        fit.truncated_terms,
    );
    Ok(fit)
}

/// Plain (non-fitted) 1-D kernel expansion of the requested family.
fn plain_axis(
    family: KernelFamily,
    order: u32,
    halfwidth: f64,
) -> Result<ShiftableExpansion1D, CliError> {
    match family {
        KernelFamily::Cosine => Ok(raised_cosine_expansion(order, halfwidth)?),
        KernelFamily::Poly => Ok(polynomial_expansion(order, halfwidth)?),
        KernelFamily::Directional => Err(CliError::Usage(
            "directional is a 2-D kernel; it has no 1-D axis form".into(),
        )),
    }
}

fn spatial_expansion(
    args: &FilterArgs,
    radius: usize,
) -> Result<SpatialExpansion, CliError> {
    if args.family == KernelFamily::Directional {
        let order = args.order_spatial.unwrap_or(4);
        if args.sigma_spatial.is_some() {
            return Err(CliError::Usage(
                "--sigma-s is not supported with --kernel directional".into(),
            ));
        }
        let spec = directional_kernel(order, radius.max(1) as f64)?;
        return Ok(spec.spatial_expansion()?);
    }
    match (args.sigma_spatial, args.order_spatial) {
        (Some(sigma), forced) => {
            let fit = fitted_expansion(
                args.family,
                sigma,
                radius.max(1) as f64,
                args.truncation,
                forced,
                args.force,
                "spatial",
            )?;
            Ok(SpatialExpansion::separable(
                fit.expansion.clone(),
                fit.expansion,
            ))
        }
        (None, Some(0)) | (None, None) => Ok(SpatialExpansion::box_window()),
        (None, Some(order)) => {
            let axis = plain_axis(args.family, order, radius.max(1) as f64)?;
            Ok(SpatialExpansion::separable(axis.clone(), axis))
        }
    }
}

fn warn_if_poly_spatial(args: &FilterArgs) {
    let poly_spatial = args.family == KernelFamily::Poly
        && (args.order_spatial.unwrap_or(0) > 0 || args.sigma_spatial.is_some());
    if poly_spatial {
        eprintln!(
            "note: monomial spatial bases grow with pixel coordinates and lose \
             accuracy on large images; cosine kernels stay exact at any size"
        );
    }
}

fn range_expansion(args: &FilterArgs) -> Result<ShiftableExpansion1D, CliError> {
    let family = match args.family {
        // The directional choice only concerns the spatial kernel.
        KernelFamily::Directional => KernelFamily::Cosine,
        other => other,
    };
    match (args.sigma_range, args.order_range) {
        (Some(sigma), forced) => {
            let fit = fitted_expansion(
                family,
                sigma,
                DEFAULT_INTENSITY_HALFWIDTH,
                args.truncation,
                forced,
                args.force,
                "range",
            )?;
            Ok(fit.expansion)
        }
        (None, Some(order)) => plain_axis(family, order, DEFAULT_INTENSITY_HALFWIDTH),
        (None, None) => Err(CliError::Usage(
            "bilateral mode needs --sigma-r or --order-r".into(),
        )),
    }
}

fn spatial(
    args: &FilterArgs,
    image: &ImageBuffer,
    radius: usize,
) -> Result<(ImageBuffer, Option<f64>), CliError> {
    if args.sigma_spatial.is_none() && args.order_spatial.is_none() {
        return Err(CliError::Usage(
            "spatial mode needs --order-s or --sigma-s".into(),
        ));
    }
    let expansion = spatial_expansion(args, radius)?;
    let output = spatial_filter_shiftable(image, &expansion, radius)?;
    let deviation = if args.oracle {
        // With a unit range kernel the bilateral brute force is exactly the
        // spatial filter oracle, and it accepts fitted spatial kernels.
        let config = BilateralConfig::new(
            expansion,
            raised_cosine_expansion(0, DEFAULT_INTENSITY_HALFWIDTH)?,
            radius,
        );
        let direct = bilateral_filter_direct(image, &config)?;
        Some(max_relative_deviation(&output, &direct))
    } else {
        None
    };
    Ok((output, deviation))
}

fn bilateral(
    args: &FilterArgs,
    image: &ImageBuffer,
    radius: usize,
) -> Result<(ImageBuffer, Option<f64>), CliError> {
    let config = BilateralConfig::new(
        spatial_expansion(args, radius)?,
        range_expansion(args)?,
        radius,
    );
    let output = bilateral_filter_shiftable(image, &config)?;
    let deviation = if args.oracle {
        let direct = bilateral_filter_direct(image, &config)?;
        Some(max_relative_deviation(&output, &direct))
    } else {
        None
    };
    Ok((output, deviation))
}

const NLM_OFFSETS: [(i32, i32); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

fn nlm(
    args: &FilterArgs,
    image: &ImageBuffer,
    radius: usize,
) -> Result<(ImageBuffer, Option<f64>), CliError> {
    if args.family != KernelFamily::Cosine {
        return Err(CliError::Usage(
            "nlm mode supports only the cosine kernel family".into(),
        ));
    }
    let smoothing = args.sigma_range.ok_or_else(|| {
        CliError::Usage("nlm mode needs --sigma-r (the smoothing parameter h)".into())
    })?;
    if !(1..=NLM_OFFSETS.len()).contains(&args.patch) {
        return Err(CliError::Usage(format!(
            "--patch must lie in 1..={}",
            NLM_OFFSETS.len()
        )));
    }
    let offsets = NLM_OFFSETS[..args.patch].to_vec();
    let weights = gaussian_patch_weights(&offsets, args.sigma_patch)?;
    let params = NlmParams::new(
        offsets,
        smoothing,
        weights,
        radius,
        args.order_range.unwrap_or(3),
    );
    let result = nlm_shiftable_experimental(image, &params)?;
    eprintln!(
        "nlm: p={} per-dim order {} window T={radius}; approximate-vs-exact \
         kernel gap {:.3e}",
        params.offsets.len(),
        params.per_dim_order,
        result.kernel_sup_gap,
    );
    let deviation = if args.oracle {
        let direct = nlm_filter_direct(image, &params)?;
        Some(max_relative_deviation(&result.image, &direct))
    } else {
        None
    };
    Ok((result.image, deviation))
}
