//! Seeded random systems and the oracle / gradient checks shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

pub mod props;

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rankfit::benchmarks::intrusive_oracle;
use rankfit::c64;
use rankfit::constraints::{assemble_constraints, residuals, symmetrize, ConstraintSystem};
use rankfit::linalg::{cx, fro, hstack, singular_values, FactoredPencil};
use rankfit::model::{delay_alphas, eval_transfer, eval_transfer_capped, AlphaFunction, EvalPoint, StructuredModel};
use rankfit::optimizer::{objective, objective_gradient, weighted_nuclear_norm, wnn_gradient};
use rankfit::samples::SampleSet;

pub fn gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat<c64> {
    Mat::from_fn(r, c, |_, _| cx(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

fn real_gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> Mat<c64> {
    Mat::from_fn(r, c, |_, _| cx(scale * rng.sample::<f64, _>(StandardNormal), 0.0))
}

/// A random real stable system `(sE + A₀ [+ e^{−s}A_d])` with `E ≈ I` and
/// `A₀` dominated by a positive diagonal.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, q: usize, io: usize) -> StructuredModel {
    let alphas: Vec<AlphaFunction> = if q == 2 {
        vec![AlphaFunction::monomial(1), AlphaFunction::constant()]
    } else {
        delay_alphas(1.0).unwrap()
    };
    let eye = Mat::from_fn(n, n, |i, j| cx(if i == j { 1.0 } else { 0.0 }, 0.0));
    let e = &eye + real_gaussian(rng, n, n, 0.05);
    let diag = Mat::from_fn(n, n, |i, j| cx(if i == j { 0.5 + 10f64.powf(2.0 * i as f64 / n as f64) } else { 0.0 }, 0.0));
    let a0 = &diag + real_gaussian(rng, n, n, 0.1);
    let mut a = vec![e, a0];
    if q == 3 {
        a.push(real_gaussian(rng, n, n, 0.1));
    }
    let b = real_gaussian(rng, n, io, 1.0);
    let c = real_gaussian(rng, io, n, 1.0);
    StructuredModel::new(alphas, a, b, c, false).unwrap()
}

/// `N` distinct log-uniform frequencies on `[0.1, 100]i` with measured responses.
pub fn random_samples(rng: &mut ChaCha8Rng, model: &StructuredModel, count: usize) -> SampleSet {
    let mut omegas: Vec<f64> = Vec::new();
    while omegas.len() < count {
        let w = 10f64.powf(rng.random_range(-1.0..2.0));
        if omegas.iter().all(|o| (o - w).abs() > 1e-2 * w) {
            omegas.push(w);
        }
    }
    let points: Vec<EvalPoint> = omegas.into_iter().map(EvalPoint::imag).collect();
    let responses = points.iter().map(|p| eval_transfer(model, p).unwrap()).collect();
    let set = SampleSet::new(points, responses, false).unwrap();
    if model.inputs() > 1 {
        set.with_random_directions(rng.random()).unwrap()
    } else {
        set
    }
}

/// `dH/ds = −C K⁻¹ K' K⁻¹ B` for polynomial and delay coefficients.
pub fn transfer_derivative(model: &StructuredModel, s: c64) -> Mat<c64> {
    let x = EvalPoint::Frequency(s);
    let k = model.pencil(&x).unwrap();
    let mut dk = Mat::<c64>::zeros(k.nrows(), k.ncols());
    for (f, a) in model.alphas.iter().zip(&model.a) {
        let d = match f.kind {
            rankfit::model::AlphaKind::Monomial { power } if power > 0 => {
                cx(power as f64, 0.0) * s.powu(power - 1)
            }
            rankfit::model::AlphaKind::ExpDelay { tau } => -tau * (-tau * s).exp(),
            _ => cx(0.0, 0.0),
        } * f.scale;
        dk += a * faer::Scale(d);
    }
    let lu = FactoredPencil::new(k.as_ref());
    let y = lu.solve(model.b.as_ref());
    let z = &dk * &y;
    -(&model.c * lu.solve(z.as_ref()))
}

fn tangential(h: &Mat<c64>, samples: &SampleSet, j: usize) -> Vec<c64> {
    // SISO: the value itself; MIMO: H b and cᵀ H.
    match (&samples.right_dirs, &samples.left_dirs) {
        (Some(b), Some(c)) => {
            let bv = Mat::from_fn(b[j].len(), 1, |i, _| b[j][i]);
            let cv = Mat::from_fn(1, c[j].len(), |_, i| c[j][i]);
            let hb = h * &bv;
            let ch = &cv * h;
            hb.col(0).iter().chain(ch.row(0).iter()).copied().collect()
        }
        _ => h.col_iter().flat_map(|c| c.iter().copied().collect::<Vec<_>>()).collect(),
    }
}

fn rel_diff(a: &[c64], b: &[c64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    num / den.max(1e-300)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleCheck {
    pub constraint_rel: f64,
    pub interpolation_rel: f64,
    pub derivative_rel: f64,
}

/// Random system with `n ≤ 20`, `N ≤ 10`, `q ∈ {2, 3}`; every fourth case is 2×2 MIMO.
pub fn oracle_case(seed: u64) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=10);
    let n = rng.random_range(count.max(2)..=20);
    let q = if rng.random_bool(0.5) { 2 } else { 3 };
    let io = if seed % 4 == 3 { 2 } else { 1 };
    let model = random_system(&mut rng, n, q, io);
    let samples = random_samples(&mut rng, &model, count);
    let oracle = intrusive_oracle(&model, &samples).unwrap();

    let system = assemble_constraints(&samples, &model.alphas, false).unwrap();
    let (r1, r2) = residuals(&system, &oracle.model.a).unwrap();
    let constraint_rel = (fro(r1.as_ref()) / fro(system.rhs_right.as_ref())).max(fro(r2.as_ref()) / fro(system.rhs_left.as_ref()));

    let mut interpolation_rel: f64 = 0.0;
    let mut derivative_rel: f64 = 0.0;
    for (j, p) in samples.points.iter().enumerate() {
        let h = eval_transfer(&model, p).unwrap();
        let g = eval_transfer_capped(&oracle.model, p, f64::INFINITY).unwrap();
        interpolation_rel = interpolation_rel.max(rel_diff(&tangential(&g, &samples, j), &tangential(&h, &samples, j)));

        // two-sided tangential Hermite condition: cᵀ H'(σ) b
        let s = p.frequency().unwrap();
        let step = 1e-5 * s.norm();
        let at = |z: c64| eval_transfer_capped(&oracle.model, &EvalPoint::Frequency(z), f64::INFINITY).unwrap();
        let fd = (at(s + step) - at(s - step)) * faer::Scale(cx(0.5 / step, 0.0));
        let exact = transfer_derivative(&model, s);
        let project = |m: &Mat<c64>| -> c64 {
            match (&samples.right_dirs, &samples.left_dirs) {
                (Some(b), Some(c)) => {
                    let bv = Mat::from_fn(b[j].len(), 1, |i, _| b[j][i]);
                    let cv = Mat::from_fn(1, c[j].len(), |_, i| c[j][i]);
                    (&cv * m * &bv)[(0, 0)]
                }
                _ => m[(0, 0)],
            }
        };
        derivative_rel = derivative_rel.max(rel_diff(&[project(&fd)], &[project(&exact)]));
    }
    OracleCheck { constraint_rel, interpolation_rel, derivative_rel }
}

#[derive(Debug, Clone, Copy)]
pub struct GradientCheck {
    pub wnn_rel: f64,
    pub objective_rel: f64,
}

fn distinct_singular_values(m: &Mat<c64>) -> bool {
    let s = singular_values(m.as_ref()).unwrap();
    s.windows(2).all(|w| w[0] - w[1] > 1e-2 * s[0]) && *s.last().unwrap() > 1e-2 * s[0]
}

fn fd_gradient(x: &[Mat<c64>], h: f64, f: impl Fn(&[Mat<c64>]) -> f64) -> Vec<Mat<c64>> {
    x.iter()
        .enumerate()
        .map(|(i, m)| {
            Mat::from_fn(m.nrows(), m.ncols(), |r, c| {
                let mut part = [0.0; 2];
                for (k, unit) in [cx(1.0, 0.0), cx(0.0, 1.0)].into_iter().enumerate() {
                    let mut p = x.to_vec();
                    let mut q = x.to_vec();
                    p[i][(r, c)] += unit * h;
                    q[i][(r, c)] -= unit * h;
                    part[k] = (f(&p) - f(&q)) / (2.0 * h);
                }
                cx(part[0], part[1])
            })
        })
        .collect()
}

fn rel_mats(a: &[Mat<c64>], b: &[Mat<c64>]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| fro((x - y).as_ref()).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| fro(y.as_ref()).powi(2)).sum::<f64>().sqrt();
    num / den
}

/// A delay constraint system on 3 random frequencies with random variables whose stacks
/// have distinct singular values; returns the relative gradient errors.
pub fn gradient_case(seed: u64, symmetric: bool) -> GradientCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 3 + (seed % 3) as usize;
    let model = random_system(&mut rng, 6, 3, 1);
    let samples = random_samples(&mut rng, &model, n);
    let system: ConstraintSystem = assemble_constraints(&samples, &model.alphas, symmetric).unwrap();
    let x: Vec<Mat<c64>> = loop {
        let x: Vec<Mat<c64>> = (0..3).map(|_| gaussian(&mut rng, n, n)).collect();
        let a = if symmetric { symmetrize(&x).unwrap() } else { x.clone() };
        let (r1, r2) = residuals(&system, &a).unwrap();
        let kink = r1.col_iter().chain(r2.col_iter()).any(|c| c.iter().any(|z| z.norm() < 1e-3));
        if distinct_singular_values(&hstack(&a)) && !kink {
            break x;
        }
    };
    let w: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
    let h = 1e-6;

    // Weighted nuclear norm of the horizontal stack, through the symmetric map when requested.
    let stack = |x: &[Mat<c64>]| hstack(&if symmetric { symmetrize(x).unwrap() } else { x.to_vec() });
    let g_stack = wnn_gradient(stack(&x).as_ref(), &w).unwrap();
    let blocks: Vec<Mat<c64>> = (0..3).map(|i| g_stack.get(.., i * n..(i + 1) * n).to_owned()).collect();
    let g_wnn: Vec<Mat<c64>> = if symmetric { blocks.iter().map(|g| g + g.transpose()).collect() } else { blocks };
    let fd_wnn = fd_gradient(&x, h, |y| weighted_nuclear_norm(stack(y).as_ref(), &w).unwrap());

    let lambda = 0.7;
    let g_obj = objective_gradient(&system, &x, lambda, &w).unwrap();
    let fd_obj = fd_gradient(&x, h, |y| objective(&system, y, lambda, &w).unwrap());
    GradientCheck { wnn_rel: rel_mats(&g_wnn, &fd_wnn), objective_rel: rel_mats(&g_obj, &fd_obj) }
}
