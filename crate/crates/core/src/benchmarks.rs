//! Ground-truth systems, samplers, and the intrusive interpolatory projection
//! used as a test oracle.

use faer::Mat;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, cx, FactoredPencil};
use crate::model::{delay_alphas, eval_transfer, thermal_alphas, AlphaKind, EvalPoint, StructuredModel, DEFAULT_CONDITION_CAP};
use crate::samples::SampleSet;

/// Default sampling of a ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampling {
    /// `count` log-spaced points `iω` with `ω ∈ [lo, hi]`.
    Frequency { lo: f64, hi: f64, count: usize },
    /// Tensor grid with `per_axis` equidistant values in `[lo, hi]` per parameter.
    Parameter { lo: f64, hi: f64, per_axis: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub model: StructuredModel,
    pub description: String,
    pub train: Sampling,
    pub test: Sampling,
}

fn real_mat(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Mat<c64> {
    Mat::from_fn(rows, cols, |i, j| cx(f(i, j), 0.0))
}

fn scalar(v: f64) -> Mat<c64> {
    real_mat(1, 1, |_, _| v)
}

/// `H(s) = 1/(s + 1 − 0.25e^{−s})` as `(E, −A, −A_τ) = (1, 1, −0.25)`.
pub fn scalar_delay_model() -> StructuredModel {
    StructuredModel::new(delay_alphas(1.0).expect("positive delay"), vec![scalar(1.0), scalar(1.0), scalar(-0.25)], scalar(1.0), scalar(1.0), true)
        .expect("consistent scalar model")
}

/// The scalar delay system sampled at `σ = 0.5, 1.0`.
pub fn gen_scalar_delay() -> Result<(GroundTruth, SampleSet)> {
    scalar_delay_at(&[cx(0.5, 0.0), cx(1.0, 0.0)], false)
}

/// The scalar delay system sampled at the conjugate pair `σ = ±0.5i`.
pub fn gen_scalar_delay_conjugate() -> Result<(GroundTruth, SampleSet)> {
    scalar_delay_at(&[cx(0.0, 0.5), cx(0.0, -0.5)], true)
}

fn scalar_delay_at(points: &[c64], closed: bool) -> Result<(GroundTruth, SampleSet)> {
    let model = scalar_delay_model();
    let pts: Vec<EvalPoint> = points.iter().map(|&s| EvalPoint::Frequency(s)).collect();
    let samples = sample_points(&model, pts, closed)?;
    let gt = GroundTruth {
        model,
        description: "scalar delay system 1/(s + 1 - 0.25 exp(-s))".into(),
        train: Sampling::Frequency { lo: 0.5, hi: 1.0, count: 2 },
        test: Sampling::Frequency { lo: 1e-2, hi: 1e2, count: 50 },
    };
    Ok((gt, samples))
}

/// Heat rod with delayed feedback: `E = I`, `A = (n+1)² tridiag(1, −2, 1)`,
/// `A_τ = 0.25 I`, input and output at node `⌈n/2⌉`.
pub fn gen_delay_rod(n: usize, tau: f64) -> Result<GroundTruth> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("delay rod needs n >= 3, got {n}")));
    }
    let k = ((n + 1) * (n + 1)) as f64;
    let e = real_mat(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
    let neg_a = real_mat(n, n, |i, j| {
        if i == j {
            2.0 * k
        } else if i.abs_diff(j) == 1 {
            -k
        } else {
            0.0
        }
    });
    let neg_ad = real_mat(n, n, |i, j| if i == j { -0.25 } else { 0.0 });
    let mid = n.div_ceil(2) - 1;
    let b = real_mat(n, 1, |i, _| if i == mid { 1.0 } else { 0.0 });
    let c = b.transpose().to_owned();
    let model = StructuredModel::new(delay_alphas(tau)?, vec![e, neg_a, neg_ad], b, c, true)?;
    Ok(GroundTruth {
        model,
        description: format!("delay heat rod, n = {n}, tau = {tau}"),
        train: Sampling::Frequency { lo: 1e-1, hi: 1e3, count: 150 },
        test: Sampling::Frequency { lo: 1e-2, hi: 1e4, count: 250 },
    })
}

/// Index of the quadrant diffusion coefficient for region `(x-half, y-half)`:
/// `(0,½)²`, `(½,1)×(0,½)`, `(½,1)²`, `(0,½)×(½,1)`.
fn quadrant(right: bool, top: bool) -> usize {
    match (right, top) {
        (false, false) => 0,
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
    }
}

/// Share of a coordinate on each side of ½: a point value, or a segment of
/// width `h` centred at `m`.
fn sides(m: f64, h: Option<f64>) -> [(bool, f64); 2] {
    let below = match h {
        Some(h) => ((0.5 - (m - 0.5 * h)) / h).clamp(0.0, 1.0),
        None if m < 0.5 => 1.0,
        None if m > 0.5 => 0.0,
        None => 0.5,
    };
    [(false, below), (true, 1.0 - below)]
}

/// Stationary diffusion on the unit square with four quadrant-wise constant
/// conductivities, discretized by finite volumes on `grid × grid` interior
/// nodes with homogeneous Dirichlet boundary. Terms `(A₀, A₁ … A₄)` with
/// `A₀ = 0` and coefficients `(1, p₁ … p₄)`; unit source `B = h²𝟙`, output the
/// mean of the solution.
pub fn gen_thermal_block(grid: usize) -> Result<GroundTruth> {
    if grid < 4 {
        return Err(Error::InvalidArgument(format!("thermal block needs grid >= 4, got {grid}")));
    }
    let n = grid * grid;
    let h = 1.0 / (grid + 1) as f64;
    let mut k = vec![Mat::<f64>::zeros(n, n); 4];
    let node = |i: usize, j: usize| j * grid + i;
    // Faces are visited once each; `other` is None for a boundary face.
    let mut add_face = |p: usize, other: Option<usize>, xm: f64, ym: f64, vertical: bool| {
        // a vertical face has fixed x and spans y
        let xs = sides(xm, if vertical { None } else { Some(h) });
        let ys = sides(ym, if vertical { Some(h) } else { None });
        for (right, wx) in xs {
            for (top, wy) in ys {
                let w = wx * wy;
                if w == 0.0 {
                    continue;
                }
                let m = &mut k[quadrant(right, top)];
                m[(p, p)] += w;
                if let Some(q) = other {
                    m[(q, q)] += w;
                    m[(p, q)] -= w;
                    m[(q, p)] -= w;
                }
            }
        }
    };
    for j in 0..grid {
        for i in 0..grid {
            let x = (i + 1) as f64 * h;
            let y = (j + 1) as f64 * h;
            let p = node(i, j);
            add_face(p, (i + 1 < grid).then(|| node(i + 1, j)), x + 0.5 * h, y, true);
            add_face(p, (j + 1 < grid).then(|| node(i, j + 1)), x, y + 0.5 * h, false);
            if i == 0 {
                add_face(p, None, x - 0.5 * h, y, true);
            }
            if j == 0 {
                add_face(p, None, x, y - 0.5 * h, false);
            }
        }
    }
    let mut a = vec![Mat::<c64>::zeros(n, n)];
    a.extend(k.iter().map(|m| real_mat(n, n, |i, j| m[(i, j)])));
    let b = real_mat(n, 1, |_, _| h * h);
    let c = real_mat(1, n, |_, _| 1.0 / n as f64);
    let alphas = thermal_alphas(4);
    let model = StructuredModel::new(alphas, a, b, c, true)?;
    Ok(GroundTruth {
        model,
        description: format!("2x2 thermal block, {grid}x{grid} interior nodes"),
        train: Sampling::Parameter { lo: 0.1, hi: 10.0, per_axis: 4 },
        test: Sampling::Parameter { lo: 0.1, hi: 10.0, per_axis: 5 },
    })
}

fn sample_points(model: &StructuredModel, points: Vec<EvalPoint>, closed: bool) -> Result<SampleSet> {
    let responses = points
        .iter()
        .enumerate()
        .map(|(j, x)| eval_transfer(model, x).map_err(|e| Error::at_point(j, e)))
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(points, responses, closed)
}

/// `count` log-spaced values in `[lo, hi]` with exact endpoints.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|j| match j {
            0 => lo,
            _ if j + 1 == count => hi,
            _ => 10f64.powf(a + (b - a) * j as f64 / (count - 1) as f64),
        })
        .collect()
}

/// `count` equidistant values in `[lo, hi]` with exact endpoints.
pub fn lin_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| match j {
            0 => lo,
            _ if j + 1 == count => hi,
            _ => lo + (hi - lo) * j as f64 / (count - 1) as f64,
        })
        .collect()
}

/// Samples `H(iω)` at log-spaced `ω ∈ [lo, hi]`. With `conjugate_close` every
/// point is followed by its conjugate.
pub fn sample_frequencies(model: &StructuredModel, count: usize, lo: f64, hi: f64, conjugate_close: bool) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("need at least one frequency".into()));
    }
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("frequency range must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let mut points = Vec::new();
    for w in log_space(lo, hi, count) {
        points.push(EvalPoint::imag(w));
        if conjugate_close {
            points.push(EvalPoint::imag(-w));
        }
    }
    sample_points(model, points, conjugate_close)
}

/// Number of parameters the model's coefficient functions read.
pub fn parameter_dimension(model: &StructuredModel) -> usize {
    model
        .alphas
        .iter()
        .filter_map(|f| match f.kind {
            AlphaKind::ParamCoordinate { index } => Some(index + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Tensor grid of parameter points, the last coordinate varying fastest.
pub fn parameter_grid(dim: usize, per_axis: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let axis = lin_space(lo, hi, per_axis);
    let total = per_axis.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            let mut p = vec![0.0; dim];
            for d in (0..dim).rev() {
                p[d] = axis[idx % per_axis];
                idx /= per_axis;
            }
            p
        })
        .collect()
}

/// Samples the model on a full tensor grid over `[lo, hi]^d`.
pub fn sample_parameters(model: &StructuredModel, per_axis: usize, lo: f64, hi: f64) -> Result<SampleSet> {
    if per_axis < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 points per axis, got {per_axis}")));
    }
    if !(hi > lo) {
        return Err(Error::InvalidArgument(format!("parameter range must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    let dim = parameter_dimension(model);
    if dim == 0 {
        return Err(Error::InvalidArgument("model has no parameter coordinates".into()));
    }
    let points = parameter_grid(dim, per_axis, lo, hi).into_iter().map(EvalPoint::Parameter).collect();
    sample_points(model, points, false)
}

/// Samples a ground truth with its default training or test design.
pub fn sample_default(gt: &GroundTruth, sampling: Sampling) -> Result<SampleSet> {
    match sampling {
        Sampling::Frequency { lo, hi, count } => sample_frequencies(&gt.model, count, lo, hi, false),
        Sampling::Parameter { lo, hi, per_axis } => sample_parameters(&gt.model, per_axis, lo, hi),
    }
}

/// Seeded uniform split of `0..n` into `n_first` and `n − n_first` sorted indices.
pub fn split_indices(n: usize, n_first: usize, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if n_first > n {
        return Err(Error::InvalidArgument(format!("cannot draw {n_first} of {n} samples")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut first = idx[..n_first].to_vec();
    let mut rest = idx[n_first..].to_vec();
    first.sort_unstable();
    rest.sort_unstable();
    Ok((first, rest))
}

/// Interpolatory projection bases and the projected model.
#[derive(Debug, Clone)]
pub struct OracleProjection {
    pub v: Mat<c64>,
    pub w: Mat<c64>,
    pub model: StructuredModel,
}

/// Two-sided interpolatory projection of a known model onto the samples:
/// `V = [K(σ₁)⁻¹B b₁, …]`, `W = [K(σ₁)⁻ᴴCᴴ c̄₁, …]`, `K(σ) = Σ αᵢ(σ)Aᵢ`, and
/// `Âᵢ = WᴴAᵢV`, `B̂ = WᴴB`, `Ĉ = CV`. SISO samples use unit directions.
///
/// The projected matrices satisfy the sample constraints exactly, and the
/// projected model interpolates `H` (and, on frequency data, `dH/ds`).
pub fn intrusive_oracle(model: &StructuredModel, samples: &SampleSet) -> Result<OracleProjection> {
    let n = model.order();
    let count = samples.len();
    if samples.inputs() != model.inputs() || samples.outputs() != model.outputs() {
        return Err(Error::Dimension(format!(
            "samples are {}x{}, model is {}x{}",
            samples.outputs(),
            samples.inputs(),
            model.outputs(),
            model.inputs()
        )));
    }
    if !samples.is_siso() && !samples.has_directions() {
        return Err(Error::InvalidArgument("MIMO samples need tangential directions".into()));
    }
    let one = vec![cx(1.0, 0.0)];
    let mut v = Mat::<c64>::zeros(n, count);
    let mut w = Mat::<c64>::zeros(n, count);
    for (j, x) in samples.points.iter().enumerate() {
        let k = model.pencil(x).map_err(|e| Error::at_point(j, e))?;
        let lu = FactoredPencil::new(k.as_ref());
        if !(lu.condition <= DEFAULT_CONDITION_CAP) {
            return Err(Error::at_point(j, Error::SingularPencil { point: x.to_string(), condition: lu.condition }));
        }
        let b_dir = samples.right_dirs.as_ref().map_or(&one, |d| &d[j]);
        let c_dir = samples.left_dirs.as_ref().map_or(&one, |d| &d[j]);
        let bb = &model.b * Mat::from_fn(b_dir.len(), 1, |i, _| b_dir[i]);
        let ct = model.c.transpose() * Mat::from_fn(c_dir.len(), 1, |i, _| c_dir[i]);
        let vj = lu.solve(bb.as_ref());
        // K⁻ᴴ Cᴴ c̄ = conj(K⁻ᵀ Cᵀ c)
        let wj = lu.solve_transpose(ct.as_ref()).conjugate().to_owned();
        v.col_mut(j).copy_from(vj.col(0));
        w.col_mut(j).copy_from(wj.col(0));
    }
    let a = model.a.iter().map(|m| w.adjoint() * m * &v).collect();
    let b = w.adjoint() * &model.b;
    let c = &model.c * &v;
    let projected = StructuredModel::new(model.alphas.clone(), a, b, c, false)?;
    Ok(OracleProjection { v, w, model: projected })
}
