use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rankfit::benchmarks::{
    gen_delay_rod, gen_scalar_delay, gen_thermal_block, sample_frequencies, sample_parameters, split_indices,
};
use rankfit::compression::{numerical_rank_rmin, project, realify, select_order, Order, DEFAULT_RANK_TOL};
use rankfit::harness::{evaluate, fit, reproduce, write_outcome, ErrorMetric, Experiment, ReproduceOptions, Scale};
use rankfit::io::{
    read_config, read_model, read_samples, write_config, write_errors, write_model, write_samples, write_spectrum,
    write_summary, write_trace,
};
use rankfit::model::parse_structure;
use rankfit::optimizer::{SolverConfig, SolverMode, SpectralRoute};
use rankfit::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "rankfit", version, about = "Rank-minimizing structured model inference from samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a benchmark system and write train/test sets and the ground-truth model
    Generate(GenerateArgs),
    /// Fit a full-order model to training data
    Fit(FitArgs),
    /// Project a fitted model onto its dominant subspaces
    Compress(CompressArgs),
    /// Per-point errors of a model against test data
    Evaluate(EvaluateArgs),
    /// Run a packaged experiment in all three solver modes
    Reproduce(ReproduceArgs),
    /// Print and export the stacked singular values of a model
    SvdReport(SvdReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Benchmark {
    ScalarDelay,
    DelayRod,
    ThermalBlock,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    benchmark: Benchmark,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Delay rod: number of interior nodes
    #[arg(long, default_value_t = 101)]
    n: usize,
    /// Delay rod: delay
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Delay rod: training frequencies
    #[arg(long, default_value_t = 150)]
    train: usize,
    /// Delay rod: test frequencies
    #[arg(long, default_value_t = 250)]
    test: usize,
    /// Thermal block: interior nodes per side
    #[arg(long, default_value_t = 31)]
    grid: usize,
    /// Thermal block: training grid points per parameter
    #[arg(long, default_value_t = 4)]
    train_per_axis: usize,
    /// Thermal block: test grid points per parameter
    #[arg(long, default_value_t = 5)]
    test_per_axis: usize,
    /// Training samples moved to a validation set by a seeded uniform draw
    #[arg(long, default_value_t = 0)]
    validation: usize,
    /// Add the conjugate of every frequency sample
    #[arg(long)]
    conjugate: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct FitArgs {
    /// Training samples (JSON)
    #[arg(long)]
    data: PathBuf,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Coefficient functions: delay, delay:TAU, second-order, thermal, or a list like "s,1,exp(-1s)"
    #[arg(long, default_value = "delay")]
    structure: String,
    /// Solver configuration file (TOML or JSON); flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Parametrize A = K + Kᵀ
    #[arg(long)]
    symmetric: bool,
    /// Divide the responses by their largest modulus before fitting
    #[arg(long)]
    normalize: bool,
    /// Seeded random tangential directions instead of canonical ones (MIMO data)
    #[arg(long)]
    random_directions: bool,
    #[arg(long)]
    lambda0: Option<f64>,
    #[arg(long)]
    lr0: Option<f64>,
    #[arg(long)]
    inner_iters: Option<usize>,
    #[arg(long)]
    lr_drop_every: Option<usize>,
    #[arg(long)]
    lr_drop_factor: Option<f64>,
    #[arg(long)]
    outer_iters: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_val: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    init_scale: Option<f64>,
    #[arg(long, value_enum)]
    spectral: Option<RouteArg>,
    #[arg(long)]
    trace_every: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Benchmark,
    EqWeights,
    Reweighted,
}

impl From<ModeArg> for SolverMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Benchmark => SolverMode::Benchmark,
            ModeArg::EqWeights => SolverMode::EqWeights,
            ModeArg::Reweighted => SolverMode::Reweighted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Svd,
    Gram,
}

impl From<RouteArg> for SpectralRoute {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Auto => SpectralRoute::Auto,
            RouteArg::Svd => SpectralRoute::Svd,
            RouteArg::Gram => SpectralRoute::Gram,
        }
    }
}

#[derive(Args)]
struct CompressArgs {
    /// Fitted model (JSON)
    #[arg(long)]
    model: PathBuf,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Fixed reduced order
    #[arg(long, conflicts_with = "tol", required_unless_present = "tol", value_parser = clap::value_parser!(u64).range(1..))]
    order: Option<u64>,
    /// Residual-energy tolerance for choosing the order
    #[arg(long)]
    tol: Option<f64>,
    /// Make the model real before reducing it (needs the fitted model and its conjugate-closed --data)
    #[arg(long, requires = "data")]
    real: bool,
    /// Training samples the model was fitted to
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    /// Test samples (JSON)
    #[arg(long)]
    data: PathBuf,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Report absolute instead of relative errors
    #[arg(long)]
    absolute: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// scalar-delay, delay-rod, delay-rod-symmetric, thermal-block or thermal-block-symmetric
    #[arg(long)]
    experiment: String,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Use the full experiment sizes instead of the desk-scale ones
    #[arg(long)]
    full: bool,
    #[arg(long)]
    inner_iters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    absolute: bool,
}

#[derive(Args)]
struct SvdReportArgs {
    #[arg(long)]
    model: PathBuf,
    /// CSV file for the spectra
    #[arg(long)]
    out: Option<PathBuf>,
    /// Residual-energy tolerance used for the suggested order
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Fit(a) => fit_cmd(a),
        Command::Compress(a) => compress_cmd(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Reproduce(a) => reproduce_cmd(a),
        Command::SvdReport(a) => svd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else if matches!(e, Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Format(_)) {
        EXIT_IO
    } else {
        EXIT_USAGE
    }
}

type Result<T> = rankfit::Result<T>;

fn generate(a: GenerateArgs) -> Result<()> {
    fs::create_dir_all(&a.out)?;
    let (gt, train, test) = match a.benchmark {
        Benchmark::ScalarDelay => {
            let (gt, train) = gen_scalar_delay()?;
            let test = sample_frequencies(&gt.model, 50, 1e-2, 1e2, a.conjugate)?;
            (gt, train, test)
        }
        Benchmark::DelayRod => {
            let gt = gen_delay_rod(a.n, a.tau)?;
            let train = sample_frequencies(&gt.model, a.train, 1e-1, 1e3, a.conjugate)?;
            let test = sample_frequencies(&gt.model, a.test, 1e-2, 1e4, a.conjugate)?;
            (gt, train, test)
        }
        Benchmark::ThermalBlock => {
            let gt = gen_thermal_block(a.grid)?;
            let train = sample_parameters(&gt.model, a.train_per_axis, 0.1, 10.0)?;
            let test = sample_parameters(&gt.model, a.test_per_axis, 0.1, 10.0)?;
            (gt, train, test)
        }
    };
    let train = if a.validation > 0 {
        if train.conjugate_closed {
            return Err(Error::InvalidArgument("a validation split would break conjugate closure".into()));
        }
        let (fit_idx, val_idx) = split_indices(train.len(), train.len().saturating_sub(a.validation), a.seed)?;
        write_samples(&a.out.join("validation.json"), &train.subset(&val_idx)?)?;
        train.subset(&fit_idx)?
    } else {
        train
    };
    write_samples(&a.out.join("train.json"), &train)?;
    write_samples(&a.out.join("test.json"), &test)?;
    write_model(&a.out.join("ground_truth.json"), &gt.model)?;
    println!("{}: {} train, {} test samples written to {}", gt.description, train.len(), test.len(), a.out.display());
    Ok(())
}

fn solver_config(a: &FitArgs) -> Result<SolverConfig> {
    let mut c = match &a.config {
        Some(path) => read_config(path)?,
        None => SolverConfig::default(),
    };
    if let Some(m) = a.mode {
        c.mode = m.into();
    }
    if let Some(n) = a.inner_iters {
        c = c.with_inner_iters(n);
    }
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = a.$field { c.$field = v; } )* };
    }
    set!(lambda0, lr0, lr_drop_every, lr_drop_factor, outer_iters, epsilon, max_val, seed, init_scale, trace_every);
    if let Some(r) = a.spectral {
        c.spectral = r.into();
    }
    let c = c.normalized();
    c.validate()?;
    Ok(c)
}

fn fit_cmd(a: FitArgs) -> Result<()> {
    let config = solver_config(&a)?;
    let alphas = parse_structure(&a.structure)?;
    let mut data = read_samples(&a.data)?;
    if !data.is_siso() && !data.has_directions() {
        data = if a.random_directions { data.with_random_directions(config.seed)? } else { data.with_canonical_directions() };
    }
    let outcome = fit(&data, &alphas, a.symmetric, a.normalize, &config)?;
    fs::create_dir_all(&a.out)?;
    write_model(&a.out.join("model.json"), &outcome.full_model)?;
    write_trace(&a.out.join("trace.csv"), &outcome.state.trace)?;
    write_config(&a.out.join("config.json"), &config)?;
    let last = outcome.state.final_row();
    println!(
        "{} fit of {} samples in {:.1}s: objective {:e}, residual {:e}",
        config.mode,
        data.len(),
        outcome.wall_time,
        last.map_or(f64::NAN, |r| r.objective),
        last.map_or(f64::NAN, |r| r.residual_l2)
    );
    Ok(())
}

fn compress_cmd(a: CompressArgs) -> Result<()> {
    let mut model = read_model(&a.model)?;
    let order = match (a.order, a.tol) {
        (Some(r), _) => Order::Fixed(r as usize),
        (None, Some(t)) => Order::Tolerance(t),
        (None, None) => unreachable!("clap requires one of --order and --tol"),
    };
    // realify needs the sample-indexed basis; projections of a real model stay real
    if a.real {
        let path = a.data.as_deref().expect("clap requires --data with --real");
        model = realify(&model, &read_samples(path)?)?;
    }
    let (reduced, report) = project(&model, order)?;
    fs::create_dir_all(&a.out)?;
    write_model(&a.out.join("reduced.json"), &reduced)?;
    write_spectrum(&a.out.join("sv.csv"), &report)?;
    write_summary(&a.out.join("compression.json"), &report)?;
    println!(
        "order {} (energy kept {:.6} / {:.6}){}",
        report.selected_order,
        report.energy_h,
        report.energy_v,
        if reduced.is_real() { ", real" } else { "" }
    );
    Ok(())
}

#[derive(Serialize)]
struct EvaluationSummary {
    error_metric: String,
    points: usize,
    median_error: f64,
    max_error: f64,
    failures: usize,
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let metric = if a.absolute { ErrorMetric::Absolute } else { ErrorMetric::Relative };
    let model = read_model(&a.model)?;
    let test = read_samples(&a.data)?;
    let e = evaluate(&model, &test, metric)?;
    fs::create_dir_all(&a.out)?;
    write_errors(&a.out.join("errors.csv"), &e.rows)?;
    let summary = EvaluationSummary {
        error_metric: metric.describe().into(),
        points: e.rows.len(),
        median_error: e.median_error,
        max_error: e.rows.iter().map(|r| r.error).fold(0.0, f64::max),
        failures: e.failures,
    };
    write_summary(&a.out.join("evaluation.json"), &summary)?;
    println!("{}: median {:e}, max {:e}, {} failed points", summary.error_metric, summary.median_error, summary.max_error, summary.failures);
    Ok(())
}

fn reproduce_cmd(a: ReproduceArgs) -> Result<()> {
    let experiment: Experiment = a.experiment.parse()?;
    let options = ReproduceOptions {
        scale: if a.full { Scale::Full } else { Scale::Desk },
        inner_iters: a.inner_iters,
        seed: a.seed,
        metric: if a.absolute { ErrorMetric::Absolute } else { ErrorMetric::Relative },
    };
    let outcome = reproduce(experiment, &options)?;
    write_outcome(&a.out, &outcome)?;
    println!("{experiment} ({}), {} train / {} test points", outcome.summary.error_metric, outcome.summary.train_points, outcome.summary.test_points);
    println!("{:<12} {:>5} {:>12} {:>12} {:>10}", "mode", "order", "median", "tail ratio", "time [s]");
    for m in &outcome.summary.modes {
        println!("{:<12} {:>5} {:>12.3e} {:>12.3e} {:>10.1}", m.mode.to_string(), m.order, m.median_error, m.tail_ratio, m.wall_time);
    }
    if let Some(flag) = outcome.summary.rank_one_recovered {
        println!("rank-one recovery: {flag}");
    }
    Ok(())
}

fn svd_report(a: SvdReportArgs) -> Result<()> {
    let model = read_model(&a.model)?;
    let (_, report) = project(&model, Order::Fixed(1))?;
    let suggested = select_order(&report.sv_horizontal, &report.sv_vertical, a.tol)?;
    let rank = numerical_rank_rmin(&model.a, DEFAULT_RANK_TOL)?;
    if let Some(path) = &a.out {
        write_spectrum(path, &report)?;
    }
    print_spectrum(&report.sv_horizontal, &report.sv_vertical);
    println!("numerical rank (1e-8): {rank}; order for tolerance {}: {suggested}", a.tol);
    Ok(())
}

fn print_spectrum(h: &[f64], v: &[f64]) {
    let top = h.first().copied().unwrap_or(1.0);
    println!("{:>5} {:>14} {:>14} {:>12}", "index", "horizontal", "vertical", "rel");
    for i in 0..h.len().max(v.len()) {
        let x = h.get(i).copied().unwrap_or(f64::NAN);
        let y = v.get(i).copied().unwrap_or(f64::NAN);
        println!("{:>5} {:>14.6e} {:>14.6e} {:>12.3e}", i + 1, x, y, x / top);
    }
}
