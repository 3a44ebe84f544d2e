//! Command-line front end.
//!
//! Single results are printed as JSON, sweeps as CSV with 17 significant
//! digits. Exit codes: 0 success, 1 usage or I/O error, 2 domain error,
//! 3 size cap exceeded.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{build_basis, Direction};
use crate::image2d::{self, Kernel2dSpec};
use crate::mc::{self, McOptions, SamplerKind};
use crate::multiplier::{
    check_zero_mean, evaluate_component_direct, evaluate_component_recursive, Kernel, KernelSpec, Method, MultiIndex,
};
use crate::special::g_a;

#[derive(Debug, Parser)]
#[command(name = "polyriesz", version, about = "Fourier multipliers of polyadic Riesz transforms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one tensor component in closed form (JSON).
    Component(ComponentArgs),
    /// Compare a Monte-Carlo estimate with the closed form (CSV).
    Validate(ValidateArgs),
    /// Monte-Carlo error against sample count (CSV).
    Converge(ConvergeArgs),
    /// Table of the moment integrals G_a(t, n) (CSV).
    Ga(GaArgs),
    /// Orthonormal frame whose first vector is xi (CSV, row-major; column k is the k-th basis vector).
    Basis(BasisArgs),
    /// Filter a 2D image with a steered kernel.
    Filter(FilterArgs),
}

#[derive(Debug, Args)]
pub struct ComponentSel {
    /// Dimension n (>= 2).
    #[arg(long)]
    pub n: usize,
    /// Tensor order t; must equal the length of --idx when given.
    #[arg(long)]
    pub t: Option<usize>,
    /// Comma-separated 1-based component indices, e.g. 1,3,3,3,3.
    #[arg(long, value_delimiter = ',', required = true)]
    pub idx: Vec<usize>,
    /// Kernel g: sgn or neglog [default: sgn for odd t, neglog for even t].
    #[arg(long)]
    pub kernel: Option<Kernel>,
    /// Comma-separated frequency direction; any non-zero length.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub xi: Vec<f64>,
}

impl ComponentSel {
    fn resolve(&self) -> Result<(KernelSpec, Direction)> {
        if let Some(t) = self.t {
            if t != self.idx.len() {
                return Err(Error::Domain(format!("--t {t} does not match {} indices in --idx", self.idx.len())));
            }
        }
        let kernel = self.kernel.unwrap_or_else(|| Kernel::for_order(self.idx.len()));
        let spec = KernelSpec::new(self.n, MultiIndex::new(self.idx.clone(), self.n)?, kernel)?;
        if self.xi.len() != self.n {
            return Err(Error::Domain(format!("--xi has {} coordinates but n = {}", self.xi.len(), self.n)));
        }
        Ok((spec, Direction::new(&self.xi)?))
    }
}

#[derive(Debug, Args)]
pub struct ComponentArgs {
    #[command(flatten)]
    pub sel: ComponentSel,
    /// Evaluator: direct or recursive.
    #[arg(long, default_value = "direct")]
    pub method: Method,
    /// Report T(xi) instead of T(xi)/S_{n-1}.
    #[arg(long)]
    pub unnormalized: bool,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub sel: ComponentSel,
    /// Sampler: mc1 (any n), mc2 or mc3 (n = 3).
    #[arg(long, default_value = "mc3")]
    pub method: SamplerKind,
    /// Number of sample points.
    #[arg(long = "N", default_value_t = 100_000)]
    pub samples: u64,
    /// Seed (mc1/mc2) or Halton start offset (mc3).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop the sin(theta) weights of mc2/mc3 (biased estimator).
    #[arg(long)]
    pub literal: bool,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub sel: ComponentSel,
    /// Sampler: mc1, mc2 or mc3.
    #[arg(long, default_value = "mc1")]
    pub method: SamplerKind,
    /// Ascending comma-separated sample counts.
    #[arg(long = "N-list", value_delimiter = ',', default_values_t = [1_000u64, 10_000, 100_000])]
    pub n_list: Vec<u64>,
    /// Repetitions per sample count, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 5)]
    pub repeats: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GaArgs {
    /// Tensor order t.
    #[arg(long)]
    pub t: usize,
    /// Dimension n (>= 2).
    #[arg(long)]
    pub n: usize,
    /// Kernel [default: both].
    #[arg(long)]
    pub kernel: Option<Kernel>,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    /// Comma-separated direction; any non-zero length.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub xi: Vec<f64>,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Power of theta_1.
    #[arg(long, default_value_t = 3)]
    pub t1: usize,
    /// Power of theta_2.
    #[arg(long, default_value_t = 1)]
    pub t2: usize,
    /// Steering angle in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    /// Input binary PGM; without it the built-in two-rectangle scene is used.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Side of the built-in scene in pixels.
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    /// Output binary PGM; the rescale map goes to <out>.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Write 16-bit samples instead of 8-bit.
    #[arg(long)]
    pub sixteen_bit: bool,
    /// JSON report of detected extrema (and corner matches for the built-in scene).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct ComponentOut<'a> {
    n: usize,
    t: usize,
    component: &'a [usize],
    kernel: Kernel,
    xi: &'a [f64],
    method: Method,
    normalized: bool,
    parity_mismatch: bool,
    value: f64,
}

fn run_component(a: &ComponentArgs) -> Result<()> {
    let (spec, xi) = a.sel.resolve()?;
    if !check_zero_mean(&spec) {
        return Err(Error::InadmissibleKernel(format!("component ({})", spec.component)));
    }
    let v = match a.method {
        Method::Direct => evaluate_component_direct(&spec, &xi)?,
        Method::Recursive => evaluate_component_recursive(&spec, &xi)?,
    };
    let out = ComponentOut {
        n: spec.n,
        t: spec.t,
        component: spec.component.indices(),
        kernel: spec.kernel,
        xi: xi.coords(),
        method: a.method,
        normalized: !a.unnormalized,
        parity_mismatch: v.parity_mismatch,
        value: if a.unnormalized { v.unnormalized_value() } else { v.normalized_value() },
    };
    emit(&a.out, &(serde_json::to_string_pretty(&out)? + "\n"))
}

fn run_validate(a: &ValidateArgs) -> Result<()> {
    let (spec, xi) = a.sel.resolve()?;
    let exact = evaluate_component_direct(&spec, &xi)?.normalized_value();
    let opts = McOptions { literal: a.literal, threads: 0 };
    let e = mc::estimate_with(&spec, &xi, a.method, a.samples, a.seed, opts)?;
    let text = format!(
        "N,kind,mean,std_error,abs_error\n{},{},{},{},{}\n",
        a.samples,
        a.method,
        csv_float(e.mean),
        csv_float(e.std_error),
        csv_float((e.mean - exact).abs())
    );
    emit(&a.out, &text)
}

fn run_converge(a: &ConvergeArgs) -> Result<()> {
    let (spec, xi) = a.sel.resolve()?;
    let exact = evaluate_component_direct(&spec, &xi)?.normalized_value();
    let table = mc::convergence_study(&spec, &xi, a.method, exact, &a.n_list, a.repeats, a.seed)?;
    let mut text = String::from("N,kind,mean_abs_error,mean_std_error\n");
    for r in &table.rows {
        let _ = writeln!(text, "{},{},{},{}", r.n_samples, a.method, csv_float(r.mean_abs_error), csv_float(r.mean_std_error));
    }
    emit(&a.out, &text)?;
    eprintln!("log-log slope: {:.4}", table.slope);
    Ok(())
}

fn run_ga(a: &GaArgs) -> Result<()> {
    let kernels = match a.kernel {
        Some(k) => vec![k],
        None => vec![Kernel::Sgn, Kernel::Neglog],
    };
    let mut text = String::from("a,t,n,kernel,value\n");
    for k in kernels {
        for level in 0..=a.t {
            let v = g_a(k, level, a.t, a.n)?;
            let _ = writeln!(text, "{level},{},{},{},{}", a.t, a.n, k, csv_float(v));
        }
    }
    emit(&a.out, &text)
}

fn run_basis(a: &BasisArgs) -> Result<()> {
    let r = build_basis(&Direction::new(&a.xi)?);
    let mut text = String::new();
    for row in r.rows() {
        let cells: Vec<String> = row.iter().map(|&v| csv_float(v)).collect();
        let _ = writeln!(text, "{}", cells.join(","));
    }
    emit(&a.out, &text)
}

#[derive(Serialize)]
struct FilterReport {
    spec: Kernel2dSpec,
    width: usize,
    height: usize,
    rescale: image2d::Rescale,
    extrema: Vec<(usize, usize)>,
    corners: Option<image2d::CornerReport>,
}

fn run_filter(a: &FilterArgs) -> Result<()> {
    let spec = Kernel2dSpec::new(a.t1, a.t2, a.theta0)?;
    let (img, outlines) = match &a.input {
        Some(path) => (image2d::read_pgm(path)?, None),
        None => {
            let rects = image2d::two_rectangle_scene(a.size);
            let outlines: Vec<Vec<(f64, f64)>> = rects.iter().map(|r| r.corners().to_vec()).collect();
            (image2d::synthesize_rectangles(a.size, a.size, &rects)?, Some(outlines))
        }
    };
    let filtered = image2d::filter_image(&img, &spec)?;
    let rescale = image2d::write_pgm_with_sidecar(&a.out, &filtered, a.sixteen_bit)?;
    if let Some(path) = &a.report {
        let report = FilterReport {
            spec,
            width: img.width,
            height: img.height,
            rescale,
            extrema: image2d::local_extrema(&filtered, image2d::EXTREMUM_THRESHOLD),
            corners: outlines.map(|o| image2d::corner_response_report(&filtered, &o)),
        };
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(())
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Component(a) => run_component(a),
        Command::Validate(a) => run_validate(a),
        Command::Converge(a) => run_converge(a),
        Command::Ga(a) => run_ga(a),
        Command::Basis(a) => run_basis(a),
        Command::Filter(a) => run_filter(a),
    }
}

/// Parses `argv` (including the program name), runs it and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
