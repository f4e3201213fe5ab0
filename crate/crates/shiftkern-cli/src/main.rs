//! `shiftkern`: constant-time filtering, shiftable-kernel design and O(1)
//! certification from the command line.

mod bench;
mod error;
mod filter;
mod kernel;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "shiftkern",
    version,
    about = "Constant-time spatial/bilateral/NLM filtering with shiftable kernels"
)]
struct Cli {
    /// Worker thread cap; falls back to SHIFTKERN_THREADS, then all cores.
    /// Results never depend on the thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter a PGM image.
    Filter(FilterArgs),
    /// Build a kernel expansion; export CSV and quality metrics.
    Kernel(KernelArgs),
    /// Time the shiftable and brute-force paths across window radii.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterMode {
    Spatial,
    Bilateral,
    Nlm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelFamily {
    Cosine,
    Poly,
    Directional,
}

#[derive(Args)]
pub struct FilterArgs {
    /// Input PGM (P2 or P5).
    #[arg(long = "in", value_name = "PGM")]
    input: String,
    /// Output PGM (canonical P5).
    #[arg(long = "out", value_name = "PGM")]
    output: String,
    #[arg(long, value_enum)]
    mode: FilterMode,
    /// Window radius in pixels.
    #[arg(long = "T", value_name = "INT")]
    radius: i64,
    /// Target sigma of the spatial Gaussian (pixels); selects the spatial
    /// order via the fit rule.
    #[arg(long = "sigma-s", value_name = "FLOAT")]
    sigma_spatial: Option<f64>,
    /// Target sigma of the range Gaussian (intensity); for NLM this is the
    /// smoothing parameter h.
    #[arg(long = "sigma-r", value_name = "FLOAT")]
    sigma_range: Option<f64>,
    /// Spatial kernel order (exponent N); with --sigma-s this forces the
    /// order and is checked against the validity threshold.
    #[arg(long = "order-s", value_name = "INT")]
    order_spatial: Option<u32>,
    /// Range kernel order; for NLM the per-dimension basis count (default 3).
    #[arg(long = "order-r", value_name = "INT")]
    order_range: Option<u32>,
    /// Truncation tolerance for fitted expansions (drop terms below this
    /// fraction of the largest weight).
    #[arg(long = "trunc", value_name = "FLOAT", default_value_t = 0.0)]
    truncation: f64,
    /// Kernel family; `directional` applies to the spatial kernel only.
    #[arg(long = "kernel", value_enum, default_value = "cosine")]
    family: KernelFamily,
    /// Also run the brute-force path and print the max relative deviation.
    #[arg(long)]
    oracle: bool,
    /// Accept orders below the fit validity threshold.
    #[arg(long)]
    force: bool,
    /// NLM patch size p (number of offsets, at most 4).
    #[arg(long = "patch", value_name = "INT", default_value_t = 2)]
    patch: usize,
    /// NLM patch-weight Gaussian sigma.
    #[arg(long = "sigma-patch", value_name = "FLOAT", default_value_t = 1.0)]
    sigma_patch: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Cosine,
    Poly,
    Directional,
    Separable,
}

#[derive(Args)]
pub struct KernelArgs {
    #[arg(long = "type", value_enum)]
    kind: KernelKind,
    #[arg(long = "N", value_name = "INT")]
    order: u32,
    #[arg(long = "T", value_name = "FLOAT")]
    halfwidth: f64,
    /// Fit the kernel to a Gaussian of this sigma instead of the plain
    /// power kernel.
    #[arg(long)]
    sigma: Option<f64>,
    /// Write the expansion as CSV (1-D families only).
    #[arg(long, value_name = "PATH")]
    csv: Option<String>,
    /// Print quality metrics as JSON.
    #[arg(long)]
    metrics: bool,
    #[arg(long = "trunc", value_name = "FLOAT", default_value_t = 0.0)]
    truncation: f64,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Side of the synthetic square image.
    #[arg(long, default_value_t = 512)]
    size: usize,
    /// Comma-separated window radii.
    #[arg(long = "T-list", value_name = "INTS", default_value = "2,4,8,16")]
    radii: String,
    /// Timed repetitions per radius (median is reported).
    #[arg(long, default_value_t = 5)]
    runs: usize,
    /// Also time the brute-force path.
    #[arg(long)]
    direct: bool,
    /// Where to write the JSON report.
    #[arg(long, value_name = "PATH")]
    report: String,
    /// Range sigma of the benchmark's bilateral kernel.
    #[arg(long = "sigma-r", default_value_t = 40.0)]
    sigma_range: f64,
}

fn configure_threads(requested: Option<usize>) {
    let from_env = std::env::var("SHIFTKERN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = requested.or(from_env) {
        if n > 0 {
            // Ignore failure: the global pool can only be set once.
            let _ = rayon_global(n);
        }
    }
}

fn rayon_global(threads: usize) -> Result<(), Box<dyn std::error::Error>> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    let outcome = match cli.command {
        Command::Filter(args) => filter::run(&args),
        Command::Kernel(args) => kernel::run(&args),
        Command::Bench(args) => bench::run(&args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
