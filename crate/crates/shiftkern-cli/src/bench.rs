//! The `bench` subcommand: O(1) certification timings.

use std::time::Instant;

use serde::Serialize;

use shiftkern::io::write_json_report;
use shiftkern::{
    bilateral_filter_direct, bilateral_filter_shiftable, fit_gaussian_raised_cosine,
    max_relative_deviation, BilateralConfig, ImageBuffer,
};

use crate::error::CliError;
use crate::BenchArgs;

/// Required max/min spread of the shiftable-path medians across radii.
const O1_SPREAD_LIMIT: f64 = 1.3;
const BENCH_SEED: u64 = 0x5EED;

/// Timing and accuracy record of one certification run.
#[derive(Serialize)]
pub struct BenchReport {
    width: usize,
    height: usize,
    radii: Vec<usize>,
    runs: usize,
    spatial_terms: usize,
    range_terms: usize,
    shiftable_median_ms: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct_median_ms: Option<Vec<f64>>,
    /// Shiftable vs direct, worst over all radii; present when both ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    max_relative_deviation: Option<f64>,
    shiftable_spread: f64,
    o1_spread_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct_growth: Option<f64>,
    machine: String,
}

fn synthetic_image(size: usize) -> ImageBuffer {
    let mut state = BENCH_SEED;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 * 255.0
    };
    let data = (0..size * size).map(|_| next()).collect();
    ImageBuffer::from_vec(size, size, data).expect("finite synthetic samples")
}

fn median_ms(runs: usize, mut op: impl FnMut()) -> f64 {
    op(); // warmup
    let mut samples: Vec<f64> = (0..runs.max(1))
        .map(|_| {
            let start = Instant::now();
            op();
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}

fn parse_radii(list: &str) -> Result<Vec<usize>, CliError> {
    let radii: Result<Vec<usize>, _> = list.split(',').map(|t| t.trim().parse()).collect();
    let radii = radii.map_err(|_| CliError::Usage(format!("invalid --T-list {list:?}")))?;
    if radii.is_empty() {
        return Err(CliError::Usage("--T-list must not be empty".into()));
    }
    Ok(radii)
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    if args.size == 0 {
        return Err(CliError::Usage("--size must be positive".into()));
    }
    let radii = parse_radii(&args.radii)?;
    let image = synthetic_image(args.size);
    let fit = fit_gaussian_raised_cosine(args.sigma_range, 255.0, 0.0)?;
    eprintln!(
        "bench kernel: box spatial, raised-cosine range N={} ({} terms)",
        fit.order,
        fit.expansion.order()
    );

    let mut shiftable_ms = Vec::with_capacity(radii.len());
    let mut direct_ms = Vec::with_capacity(radii.len());
    let mut worst_deviation: Option<f64> = None;
    for &radius in &radii {
        let config = BilateralConfig::with_box_spatial(fit.expansion.clone(), radius);
        shiftable_ms.push(median_ms(args.runs, || {
            bilateral_filter_shiftable(&image, &config).expect("bench filter");
        }));
        if args.direct {
            direct_ms.push(median_ms(args.runs, || {
                bilateral_filter_direct(&image, &config).expect("bench oracle");
            }));
            let fast = bilateral_filter_shiftable(&image, &config)?;
            let slow = bilateral_filter_direct(&image, &config)?;
            let deviation = max_relative_deviation(&fast, &slow);
            worst_deviation = Some(worst_deviation.unwrap_or(0.0).max(deviation));
        }
        eprintln!(
            "T={radius}: shiftable {:.2} ms{}",
            shiftable_ms.last().unwrap(),
            direct_ms
                .last()
                .map(|ms| format!(", direct {ms:.2} ms"))
                .unwrap_or_default(),
        );
    }

    let max = shiftable_ms.iter().cloned().fold(0.0f64, f64::max);
    let min = shiftable_ms.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = max / min;
    let growth = if args.direct && direct_ms.len() > 1 {
        Some(direct_ms.last().unwrap() / direct_ms.first().unwrap())
    } else {
        None
    };

    let report = BenchReport {
        width: args.size,
        height: args.size,
        radii,
        runs: args.runs,
        spatial_terms: 1,
        range_terms: fit.expansion.order(),
        shiftable_median_ms: shiftable_ms,
        direct_median_ms: args.direct.then_some(direct_ms),
        max_relative_deviation: worst_deviation,
        shiftable_spread: spread,
        o1_spread_ok: spread <= O1_SPREAD_LIMIT,
        direct_growth: growth,
        machine: format!(
            "{}-{}, {} worker threads",
            std::env::consts::OS,
            std::env::consts::ARCH,
            rayon::current_num_threads()
        ),
    };
    write_json_report(&report, &args.report)?;
    println!(
        "shiftable spread {spread:.3} ({})",
        if report.o1_spread_ok {
            "within the O(1) criterion"
        } else {
            "EXCEEDS the O(1) criterion"
        }
    );
    if let Some(growth) = growth {
        println!("direct path growth {growth:.1}x across the radius list");
    }
    Ok(())
}
