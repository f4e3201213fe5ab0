//! The `kernel` subcommand: expansion export and quality metrics.

use serde::Serialize;

use shiftkern::io::{json_report_string, write_expansion_csv};
use shiftkern::kernel::{isotropy_of, overshoot_of};
use shiftkern::{
    directional_kernel, fit_gaussian_polynomial, fit_gaussian_raised_cosine,
    polynomial_expansion, raised_cosine_expansion, truncate_expansion, ShiftableExpansion1D,
};

use crate::error::CliError;
use crate::{KernelArgs, KernelKind};

/// Metrics emitted by `--metrics`, in stable key order.
#[derive(Serialize)]
struct KernelMetrics {
    #[serde(skip_serializing_if = "Option::is_none")]
    sup_error: Option<f64>,
    isotropy: f64,
    corner_overshoot: f64,
    terms: usize,
}

pub fn run(args: &KernelArgs) -> Result<(), CliError> {
    match args.kind {
        KernelKind::Cosine | KernelKind::Poly => one_dimensional(args),
        KernelKind::Separable => two_dimensional(args, false),
        KernelKind::Directional => two_dimensional(args, true),
    }
}

fn build_axis(args: &KernelArgs) -> Result<(ShiftableExpansion1D, Option<f64>), CliError> {
    if let Some(sigma) = args.sigma {
        let fit = match args.kind {
            KernelKind::Cosine => {
                fit_gaussian_raised_cosine(sigma, args.halfwidth, args.truncation)
            }
            KernelKind::Poly => fit_gaussian_polynomial(sigma, args.halfwidth, args.truncation),
            _ => unreachable!("fits are one-dimensional"),
        }?;
        eprintln!(
            "fit: {} N={} sup_error={:.3e} terms={} truncated={}",
            fit.variant.name(),
            fit.order,
            fit.sup_error,
            fit.expansion.order(),
            fit.truncated_terms,
        );
        Ok((fit.expansion, Some(fit.sup_error)))
    } else {
        let expansion = match args.kind {
            KernelKind::Cosine => raised_cosine_expansion(args.order, args.halfwidth),
            KernelKind::Poly => polynomial_expansion(args.order, args.halfwidth),
            _ => unreachable!(),
        }?;
        let truncated = truncate_expansion(&expansion, args.truncation)?;
        Ok((truncated.expansion, None))
    }
}

fn one_dimensional(args: &KernelArgs) -> Result<(), CliError> {
    let (expansion, sup_error) = build_axis(args)?;
    if let Some(path) = &args.csv {
        write_expansion_csv(&expansion, path)?;
    }
    if args.metrics {
        // 2-D metrics are reported on the separable self-product.
        let half = args.halfwidth;
        let kernel = |x: f64, y: f64| expansion.kernel_value(x) * expansion.kernel_value(y);
        let metrics = KernelMetrics {
            sup_error,
            isotropy: isotropy_of(kernel, half),
            corner_overshoot: overshoot_of(kernel, half),
            terms: expansion.order(),
        };
        println!("{}", json_report_string(&metrics)?);
    }
    Ok(())
}

fn two_dimensional(args: &KernelArgs, directional: bool) -> Result<(), CliError> {
    if args.csv.is_some() {
        return Err(CliError::Usage(
            "--csv exports 1-D expansions; use --type cosine or --type poly".into(),
        ));
    }
    if args.sigma.is_some() {
        return Err(CliError::Usage(
            "--sigma fits are 1-D; use --type cosine or --type poly".into(),
        ));
    }
    if !args.metrics {
        return Err(CliError::Usage(
            "nothing to do: pass --metrics for 2-D kernel types".into(),
        ));
    }
    let half = args.halfwidth;
    let (kernel, terms): (Box<dyn Fn(f64, f64) -> f64>, usize) = if directional {
        let spec = directional_kernel(args.order, half)?;
        let expansion = spec.spatial_expansion()?;
        let count = expansion.term_count();
        (
            Box::new(move |x, y| spec.evaluate_2d(x, y).expect("directional accepts any point")),
            count,
        )
    } else {
        let axis = raised_cosine_expansion(args.order, half)?;
        let count = axis.order() * axis.order();
        (
            Box::new(move |x, y| axis.kernel_value(x) * axis.kernel_value(y)),
            count,
        )
    };
    let metrics = KernelMetrics {
        sup_error: None,
        isotropy: isotropy_of(&kernel, half),
        corner_overshoot: overshoot_of(&kernel, half),
        terms,
    };
    println!("{}", json_report_string(&metrics)?);
    Ok(())
}
