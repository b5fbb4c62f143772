//! Experiment pipeline: fitting, compression, error evaluation, and the
//! reproducible comparisons of the three solver modes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{
    gen_delay_rod, gen_scalar_delay, gen_thermal_block, log_space, sample_frequencies, sample_parameters,
    split_indices, GroundTruth,
};
use crate::compression::{full_order_model, project, CompressionReport, Order};
use crate::constraints::{assemble_constraints, ConstraintSystem};
use crate::error::{Error, Result};
use crate::io::{point_label, write_errors, write_spectrum, write_summary, write_trace, ErrorRow};
use crate::linalg::{cx, fro};
use crate::model::{eval_transfer, AlphaFunction, EvalPoint, StructuredModel};
use crate::optimizer::{solve_rsmi, SolveState, SolverConfig, SolverMode};
use crate::samples::{normalize, SampleSet};

/// Denominator floor of the relative error.
pub const ERROR_FLOOR: f64 = 1e-300;

/// Pointwise error measure: `‖H − H̃‖_F / max(‖H‖_F, 1e-300)` or the plain difference norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMetric {
    #[default]
    Relative,
    Absolute,
}

impl ErrorMetric {
    pub fn describe(self) -> &'static str {
        match self {
            ErrorMetric::Relative => "relative Frobenius error |H - H_model|_F / max(|H|_F, 1e-300)",
            ErrorMetric::Absolute => "absolute Frobenius error |H - H_model|_F",
        }
    }
}

pub fn pointwise_error(reference: &Mat<crate::c64>, model: &Mat<crate::c64>, metric: ErrorMetric) -> f64 {
    let diff = fro((reference - model).as_ref());
    match metric {
        ErrorMetric::Relative => diff / fro(reference.as_ref()).max(ERROR_FLOOR),
        ErrorMetric::Absolute => diff,
    }
}

/// Exact median (mean of the two middle values for even counts); NaN when empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        let (a, b) = (v[n / 2 - 1], v[n / 2]);
        if a == b {
            a
        } else {
            a + (b - a) / 2.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub rows: Vec<ErrorRow>,
    pub median_error: f64,
    /// Points where the model could not be evaluated; their error is infinite.
    pub failures: usize,
}

/// Compares a model with measured test data point by point.
pub fn evaluate(model: &StructuredModel, test: &SampleSet, metric: ErrorMetric) -> Result<Evaluation> {
    if model.outputs() != test.outputs() || model.inputs() != test.inputs() {
        return Err(Error::Dimension(format!(
            "model is {}x{} but data are {}x{}",
            model.outputs(),
            model.inputs(),
            test.outputs(),
            test.inputs()
        )));
    }
    let rows: Vec<ErrorRow> = test
        .points
        .iter()
        .zip(&test.responses)
        .enumerate()
        .map(|(index, (p, h))| {
            let (error, failed) = match eval_transfer(model, p) {
                Ok(g) => {
                    let e = pointwise_error(h, &g, metric);
                    if e.is_finite() {
                        (e, false)
                    } else {
                        (f64::INFINITY, true)
                    }
                }
                Err(_) => (f64::INFINITY, true),
            };
            ErrorRow { index, point: point_label(p), error, failed }
        })
        .collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
    Ok(Evaluation { median_error: median(&errors), failures: rows.iter().filter(|r| r.failed).count(), rows })
}

/// Multiplies the output matrix by `factor`, undoing a normalization of the data.
pub fn scale_outputs(model: &StructuredModel, factor: f64) -> StructuredModel {
    let mut out = model.clone();
    out.c = &model.c * faer::Scale(cx(factor, 0.0));
    out
}

/// A fitted, not yet compressed model with everything needed to reduce it.
#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub system: ConstraintSystem,
    pub state: SolveState,
    /// The sample-indexed model of the solution, in the units of the original data.
    pub full_model: StructuredModel,
    /// Factor the responses were divided by before fitting (1 if not normalized).
    pub scale: f64,
    pub wall_time: f64,
}

/// Assembles the constraints and runs the reweighting driver.
pub fn fit(
    train: &SampleSet,
    alphas: &[AlphaFunction],
    symmetric: bool,
    normalize_data: bool,
    config: &SolverConfig,
) -> Result<FitOutcome> {
    let start = Instant::now();
    let (data, scale) = if normalize_data { normalize(train)? } else { (train.clone(), 1.0) };
    let system = assemble_constraints(&data, alphas, symmetric)?;
    let state = solve_rsmi(&system, config)?;
    let full_model = scale_outputs(&full_order_model(&state.a, &system, alphas)?, scale);
    Ok(FitOutcome { system, state, full_model, scale, wall_time: start.elapsed().as_secs_f64() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub mode: SolverMode,
    pub order_used: usize,
    pub per_point_error: Vec<ErrorRow>,
    pub median_error: f64,
    pub failures: usize,
    pub validation_median: Option<f64>,
    pub final_residual_l2: f64,
    pub sv_report: CompressionReport,
    pub wall_time: f64,
    pub config_echo: SolverConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ScalarDelay,
    DelayRod,
    DelayRodSymmetric,
    ThermalBlock,
    ThermalBlockSymmetric,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::ScalarDelay,
        Experiment::DelayRod,
        Experiment::DelayRodSymmetric,
        Experiment::ThermalBlock,
        Experiment::ThermalBlockSymmetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ScalarDelay => "scalar-delay",
            Experiment::DelayRod => "delay-rod",
            Experiment::DelayRodSymmetric => "delay-rod-symmetric",
            Experiment::ThermalBlock => "thermal-block",
            Experiment::ThermalBlockSymmetric => "thermal-block-symmetric",
        }
    }

    pub fn symmetric(self) -> bool {
        matches!(self, Experiment::DelayRodSymmetric | Experiment::ThermalBlockSymmetric)
    }

    /// Reduced order compared across modes.
    pub fn order(self) -> usize {
        match self {
            Experiment::ScalarDelay | Experiment::DelayRodSymmetric => 1,
            Experiment::DelayRod => 3,
            Experiment::ThermalBlock | Experiment::ThermalBlockSymmetric => 10,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
            Error::InvalidArgument(format!("unknown experiment '{s}', expected one of {}", names.join(", ")))
        })
    }
}

/// Size of a reproduction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Reduced sizes that finish in minutes on a laptop.
    #[default]
    Desk,
    /// The sizes of the reference experiments.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceOptions {
    pub scale: Scale,
    /// Inner iterations per stage; `None` uses the experiment default.
    pub inner_iters: Option<usize>,
    pub seed: u64,
    pub metric: ErrorMetric,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions { scale: Scale::Desk, inner_iters: None, seed: 0, metric: ErrorMetric::Relative }
    }
}

/// Data and settings of one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentData {
    pub ground_truth: GroundTruth,
    pub train: SampleSet,
    pub validation: Option<SampleSet>,
    pub test: SampleSet,
    pub symmetric: bool,
    pub order: usize,
    pub inner_iters: usize,
}

/// Training points of the thermal block kept for fitting; the rest validate.
pub const THERMAL_TRAIN: usize = 200;

pub fn experiment_data(experiment: Experiment, options: &ReproduceOptions) -> Result<ExperimentData> {
    let full = options.scale == Scale::Full;
    let default_inner = if full { SolverConfig::default().inner_iters } else { 10_000 };
    let mut validation = None;
    let (ground_truth, train, test, inner) = match experiment {
        Experiment::ScalarDelay => {
            let (gt, train) = gen_scalar_delay()?;
            let test = frequency_samples(&gt.model, log_space(1e-2, 1e2, 50))?;
            (gt, train, test, SolverConfig::default().inner_iters)
        }
        Experiment::DelayRod | Experiment::DelayRodSymmetric => {
            let gt = gen_delay_rod(101, 1.0)?;
            let (n_train, n_test) = if full { (150, 250) } else { (40, 100) };
            let train = sample_frequencies(&gt.model, n_train, 1e-1, 1e3, false)?;
            let test = sample_frequencies(&gt.model, n_test, 1e-2, 1e4, false)?;
            (gt, train, test, default_inner)
        }
        Experiment::ThermalBlock | Experiment::ThermalBlockSymmetric => {
            let gt = gen_thermal_block(if full { 31 } else { 15 })?;
            let all = sample_parameters(&gt.model, 4, 0.1, 10.0)?;
            let (fit_idx, val_idx) = split_indices(all.len(), THERMAL_TRAIN, options.seed)?;
            validation = Some(all.subset(&val_idx)?);
            let test = sample_parameters(&gt.model, 5, 0.1, 10.0)?;
            (gt, all.subset(&fit_idx)?, test, default_inner)
        }
    };
    Ok(ExperimentData {
        ground_truth,
        train,
        validation,
        test,
        symmetric: experiment.symmetric(),
        order: experiment.order(),
        inner_iters: options.inner_iters.unwrap_or(inner),
    })
}

fn frequency_samples(model: &StructuredModel, omegas: Vec<f64>) -> Result<SampleSet> {
    let points: Vec<EvalPoint> = omegas.into_iter().map(EvalPoint::imag).collect();
    let responses = points.iter().map(|p| eval_transfer(model, p)).collect::<Result<Vec<_>>>()?;
    SampleSet::new(points, responses, false)
}

pub const MODES: [SolverMode; 3] = [SolverMode::Benchmark, SolverMode::EqWeights, SolverMode::Reweighted];

/// Fits one mode, compresses to the experiment order and evaluates on the test data.
pub fn run_mode(data: &ExperimentData, mode: SolverMode, options: &ReproduceOptions) -> Result<(FitReport, SolveState)> {
    let config = SolverConfig::for_mode(mode).with_inner_iters(data.inner_iters).with_seed(options.seed).normalized();
    let outcome = fit(&data.train, &data.ground_truth.model.alphas, data.symmetric, false, &config)?;
    let (reduced, sv_report) = project(&outcome.full_model, Order::Fixed(data.order))?;
    let eval = evaluate(&reduced, &data.test, options.metric)?;
    let validation_median = match &data.validation {
        Some(v) => Some(evaluate(&reduced, v, options.metric)?.median_error),
        None => None,
    };
    let report = FitReport {
        mode,
        order_used: data.order,
        per_point_error: eval.rows,
        median_error: eval.median_error,
        failures: eval.failures,
        validation_median,
        final_residual_l2: outcome.state.final_row().map_or(f64::NAN, |r| r.residual_l2),
        sv_report,
        wall_time: outcome.wall_time,
        config_echo: config,
    };
    Ok((report, outcome.state))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: SolverMode,
    pub order: usize,
    pub median_error: f64,
    pub failures: usize,
    pub validation_median: Option<f64>,
    /// `γ_{r+1}/γ₁` of the horizontal stack, with `r` the compared order.
    pub tail_ratio: f64,
    /// Share of the horizontal spectrum kept at the compared order.
    pub energy_kept: f64,
    pub final_residual_l2: f64,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub experiment: Experiment,
    pub error_metric: String,
    pub train_points: usize,
    pub test_points: usize,
    pub modes: Vec<ModeSummary>,
    /// Scalar delay only: whether the reweighted solution has numerical rank one (`γ₂/γ₁ ≤ 1e-3`).
    pub rank_one_recovered: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub summary: ExperimentSummary,
    pub reports: Vec<FitReport>,
    pub states: Vec<SolveState>,
}

fn tail_ratio(s: &[f64], r: usize) -> f64 {
    match (s.first(), s.get(r)) {
        (Some(&top), Some(&next)) if top > 0.0 => next / top,
        _ => 0.0,
    }
}

/// Runs all three modes of an experiment.
pub fn reproduce(experiment: Experiment, options: &ReproduceOptions) -> Result<ExperimentOutcome> {
    let data = experiment_data(experiment, options)?;
    let mut reports = Vec::new();
    let mut states = Vec::new();
    for mode in MODES {
        let (report, state) = run_mode(&data, mode, options)?;
        reports.push(report);
        states.push(state);
    }
    let modes = reports
        .iter()
        .map(|r| ModeSummary {
            mode: r.mode,
            order: r.order_used,
            median_error: r.median_error,
            failures: r.failures,
            validation_median: r.validation_median,
            tail_ratio: tail_ratio(&r.sv_report.sv_horizontal, r.order_used),
            energy_kept: r.sv_report.energy_h,
            final_residual_l2: r.final_residual_l2,
            wall_time: r.wall_time,
        })
        .collect::<Vec<_>>();
    let rank_one_recovered = (experiment == Experiment::ScalarDelay).then(|| {
        let s = &reports[2].sv_report.sv_horizontal;
        tail_ratio(s, 1) <= 1e-3
    });
    let summary = ExperimentSummary {
        experiment,
        error_metric: options.metric.describe().into(),
        train_points: data.train.len(),
        test_points: data.test.len(),
        modes,
        rank_one_recovered,
    };
    Ok(ExperimentOutcome { summary, reports, states })
}

/// Writes `sv_<mode>.csv`, `errors_<mode>.csv`, `trace_<mode>.csv`,
/// `summary.json` and `summary.csv` into `dir`.
pub fn write_outcome(dir: &Path, outcome: &ExperimentOutcome) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (report, state) in outcome.reports.iter().zip(&outcome.states) {
        let mode = report.mode;
        write_spectrum(&dir.join(format!("sv_{mode}.csv")), &report.sv_report)?;
        write_errors(&dir.join(format!("errors_{mode}.csv")), &report.per_point_error)?;
        write_trace(&dir.join(format!("trace_{mode}.csv")), &state.trace)?;
    }
    write_summary(&dir.join("summary.json"), &outcome.summary)?;
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    for m in &outcome.summary.modes {
        w.serialize(m)?;
    }
    w.flush()?;
    Ok(())
}
