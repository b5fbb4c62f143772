use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::nadam::Nadam;
use super::objective::{Problem, ResidualNorm};
use super::wnn::update_weights;
use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::linalg::{c64, convert, hstack, singular_values, Field};

/// Objective is aborted once it exceeds this multiple of its starting value.
const DIVERGENCE_FACTOR: f64 = 1e6;

/// One recording of the optimizer progress. `wnn_term` is the sum of the
/// weighted nuclear norms before scaling by `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub outer: usize,
    pub step: usize,
    pub objective: f64,
    pub residual_l2: f64,
    pub wnn_term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveState {
    /// Model matrices `Aᵢ` (already `Kᵢ + Kᵢᵀ` in symmetric mode).
    pub a: Vec<Mat<c64>>,
    /// The free variables `Kᵢ` in symmetric mode.
    pub k: Option<Vec<Mat<c64>>>,
    /// Weights used in the last stage, indexed to descending singular values.
    pub weights: Vec<f64>,
    pub lambda: f64,
    pub outer_index: usize,
    pub trace: Vec<TraceRow>,
}

impl SolveState {
    pub fn objective_trace(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.objective).collect()
    }

    /// The optimization variables: `Kᵢ` in symmetric mode, `Aᵢ` otherwise.
    pub fn variables(&self) -> &[Mat<c64>] {
        self.k.as_deref().unwrap_or(&self.a)
    }

    pub fn final_row(&self) -> Option<&TraceRow> {
        self.trace.last()
    }
}

fn pack<T: Field>(x: &[Mat<T>], out: &mut [f64]) {
    let mut o = 0;
    for m in x {
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                m[(r, c)].write_parts(&mut out[o..o + T::PARTS]);
                o += T::PARTS;
            }
        }
    }
}

fn unpack<T: Field>(params: &[f64], x: &mut [Mat<T>]) {
    let mut o = 0;
    for m in x.iter_mut() {
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                m[(r, c)] = T::read_parts(&params[o..o + T::PARTS]);
                o += T::PARTS;
            }
        }
    }
}

fn initial_point<T: Field>(n: usize, q: usize, cfg: &SolverConfig) -> Vec<Mat<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let std = cfg.init_scale / (T::PARTS as f64).sqrt();
    let normal = Normal::new(0.0, std).expect("init_scale validated");
    let mut parts = vec![0.0; T::PARTS];
    (0..q)
        .map(|_| {
            Mat::from_fn(n, n, |_, _| {
                for p in parts.iter_mut() {
                    *p = if std > 0.0 { normal.sample(&mut rng) } else { 0.0 };
                }
                T::read_parts(&parts)
            })
        })
        .collect()
}

struct Stage<'a> {
    outer: usize,
    lambda: f64,
    lr0: f64,
    weights: &'a [f64],
    step_offset: usize,
}

fn run_stage<T: Field>(p: &Problem<T>, x: &mut [Mat<T>], stage: &Stage<'_>, cfg: &SolverConfig, trace: &mut Vec<TraceRow>) -> Result<()> {
    let len = x.iter().map(|m| m.nrows() * m.ncols()).sum::<usize>() * T::PARTS;
    let mut params = vec![0.0; len];
    let mut grad = vec![0.0; len];
    pack(x, &mut params);
    let mut opt = Nadam::new(len);
    let mut limit = f64::INFINITY;
    let record = |trace: &mut Vec<TraceRow>, t: usize, e: &super::objective::Evaluation<T>| {
        trace.push(TraceRow {
            outer: stage.outer,
            step: stage.step_offset + t,
            objective: e.value,
            residual_l2: e.residual_l2,
            wnn_term: e.wnn,
        })
    };
    for t in 0..cfg.inner_iters {
        let e = p.evaluate(x, stage.lambda, stage.weights)?;
        if t == 0 {
            limit = DIVERGENCE_FACTOR * e.value.max(f64::MIN_POSITIVE);
        }
        if e.value > limit {
            return Err(Error::Diverged { step: stage.step_offset + t, value: e.value, limit });
        }
        if t % cfg.trace_every == 0 {
            record(trace, t, &e);
        }
        let drops = (t / cfg.lr_drop_every) as i32;
        let lr = stage.lr0 / cfg.lr_drop_factor.powi(drops);
        pack(&e.grad, &mut grad);
        opt.update(&mut params, &grad, lr);
        unpack(&params, x);
    }
    let e = p.evaluate(x, stage.lambda, stage.weights)?;
    if e.value > limit {
        return Err(Error::Diverged { step: stage.step_offset + cfg.inner_iters, value: e.value, limit });
    }
    record(trace, cfg.inner_iters, &e);
    Ok(())
}

fn solve_in<T: Field>(system: &ConstraintSystem, cfg: &SolverConfig, outer_iters: usize) -> Result<SolveState> {
    let p: Problem<T> = Problem::new(system, cfg.spectral, ResidualNorm::default());
    let n = p.n;
    let mut x = initial_point::<T>(n, p.q(), cfg);
    p.project_conjugate_symmetric(&mut x);
    let mut trace = Vec::new();
    let mut weights = vec![1.0; n];
    let wrap = |i: usize, e: Error| if outer_iters > 0 { Error::Outer { outer: i, source: Box::new(e) } } else { e };
    for i in 0..=outer_iters {
        if i > 0 {
            let s = singular_values(hstack(&p.matrices(&x)).as_ref()).map_err(|e| wrap(i, e))?;
            weights = update_weights(&s, cfg.epsilon, cfg.max_val)?;
        }
        let stage = Stage { outer: i, lambda: cfg.lambda_at(i), lr0: cfg.lr_at(i), weights: &weights, step_offset: i * cfg.inner_iters };
        run_stage(&p, &mut x, &stage, cfg, &mut trace).map_err(|e| wrap(i, e))?;
        p.project_conjugate_symmetric(&mut x);
    }
    let to_c = |m: &Mat<T>| convert::<T, c64>(m.as_ref());
    let a = p.matrices(&x).iter().map(to_c).collect();
    let k = p.symmetric.then(|| x.iter().map(to_c).collect());
    Ok(SolveState { a, k, weights, lambda: cfg.lambda_at(outer_iters), outer_index: outer_iters, trace })
}

fn dispatch(system: &ConstraintSystem, cfg: &SolverConfig, outer_iters: usize) -> Result<SolveState> {
    if system.is_real() {
        solve_in::<f64>(system, cfg, outer_iters)
    } else {
        solve_in::<c64>(system, cfg, outer_iters)
    }
}

/// One inner solve with unit weights and `λ⁽⁰⁾`, from the seeded initialization.
///
/// Exactly real systems are solved in real arithmetic from a real
/// initialization, which keeps the solution real. For conjugate-closed data
/// the iterate is projected onto conjugate-symmetric matrices after the
/// initialization and after every stage, so the solution can be realified.
pub fn optimize(system: &ConstraintSystem, config: &SolverConfig) -> Result<SolveState> {
    let cfg = config.clone().normalized();
    cfg.validate()?;
    dispatch(system, &cfg, 0)
}

/// Iterative reweighting: an initial solve with unit weights followed by
/// `outer_iters` re-solves with `wⱼ = min(max_val, 1/(sⱼ + ε))` taken from the
/// previous solution, warm started, with `λ⁽ⁱ⁾` and a halved learning rate.
pub fn solve_rsmi(system: &ConstraintSystem, config: &SolverConfig) -> Result<SolveState> {
    let cfg = config.clone().normalized();
    cfg.validate()?;
    dispatch(system, &cfg, cfg.outer_iters)
}
