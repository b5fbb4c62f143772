//! Invariant suites driven by an explicit proptest runner, so they can run
//! both as `#[test]`s and from the acceptance runner.

use faer::Mat;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{gaussian, random_samples, random_system};
use rankfit::benchmarks::intrusive_oracle;
use rankfit::c64;
use rankfit::compression::{project, realify, residual_energy, select_order, Order};
use rankfit::constraints::assemble_constraints;
use rankfit::io::{read_config, read_model, read_samples, write_config, write_model, write_samples};
use rankfit::linalg::{cx, fro, singular_values, FactoredPencil};
use rankfit::model::{eval_transfer, eval_transfer_capped, rescale_alpha, transpose_map, EvalPoint, StructuredModel};
use rankfit::optimizer::{objective, solve_rsmi, weighted_nuclear_norm, SolverConfig, SolverMode};
use rankfit::samples::SampleSet;

pub type Outcome = std::result::Result<(), String>;

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>) -> Outcome {
    // fixed RNG so every run checks the same cases
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn rel(a: c64, b: c64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn conjugate_closed(rng: &mut ChaCha8Rng, model: &StructuredModel, pairs: usize) -> SampleSet {
    let half = random_samples(rng, model, pairs);
    let mut points = Vec::new();
    let mut responses = Vec::new();
    for (p, h) in half.points.iter().zip(&half.responses) {
        points.push(p.clone());
        responses.push(h.clone());
        points.push(p.conj());
        responses.push(h.conjugate().to_owned());
    }
    SampleSet::new(points, responses, true).unwrap()
}

pub fn wnn_homogeneity() -> Outcome {
    run(64, (any::<u64>(), -5.0f64..5.0, -5.0f64..5.0), |(seed, re, im)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = gaussian(&mut rng, 4, 7);
        let w = [3.0, 2.0, 0.5, 0.1];
        let c = cx(re, im);
        let scaled = &t * faer::Scale(c);
        let lhs = weighted_nuclear_norm(scaled.as_ref(), &w).unwrap();
        let rhs = c.norm() * weighted_nuclear_norm(t.as_ref(), &w).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        Ok(())
    })
}

pub fn unit_weights_classical() -> Outcome {
    run(64, (any::<u64>(), 1usize..6, 1usize..6), |(seed, rows, cols)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = gaussian(&mut rng, rows, 1);
        let v = gaussian(&mut rng, 1, cols);
        let rank_one = &u * &v;
        let ones = vec![1.0; rows.min(cols)];
        // nuclear norm of a rank-one matrix is its Frobenius norm
        let nuc = weighted_nuclear_norm(rank_one.as_ref(), &ones).unwrap();
        prop_assert!((nuc - fro(rank_one.as_ref())).abs() <= 1e-12 * nuc);
        // in general ‖T‖_F ≤ ‖T‖_* ≤ √k ‖T‖_F, and ‖T‖_* is the sum of singular values
        let t = gaussian(&mut rng, rows, cols);
        let nuc = weighted_nuclear_norm(t.as_ref(), &ones).unwrap();
        let f = fro(t.as_ref());
        prop_assert!(nuc >= f * (1.0 - 1e-12) && nuc <= f * (ones.len() as f64).sqrt() * (1.0 + 1e-12));
        let sum: f64 = singular_values(t.as_ref()).unwrap().iter().sum();
        prop_assert!((nuc - sum).abs() <= 1e-12 * sum);
        Ok(())
    })
}

pub fn convex_midpoint() -> Outcome {
    run(64, (any::<u64>(), 0.0f64..2.0), |(seed, lambda)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_system(&mut rng, 6, 3, 1);
        let samples = random_samples(&mut rng, &model, 4);
        let sys = assemble_constraints(&samples, &model.alphas, false).unwrap();
        let x: Vec<Mat<c64>> = (0..3).map(|_| gaussian(&mut rng, 4, 4)).collect();
        let y: Vec<Mat<c64>> = (0..3).map(|_| gaussian(&mut rng, 4, 4)).collect();
        let mid: Vec<Mat<c64>> = x.iter().zip(&y).map(|(a, b)| (a + b) * faer::Scale(cx(0.5, 0.0))).collect();
        // nonincreasing weights keep the regularizer convex
        let w = [1.0, 1.0, 0.5, 0.25];
        let f = |z: &[Mat<c64>]| objective(&sys, z, lambda, &w).unwrap();
        let (fx, fy, fm) = (f(&x), f(&y), f(&mid));
        prop_assert!(fm <= 0.5 * (fx + fy) * (1.0 + 1e-12));
        Ok(())
    })
}

pub fn select_order_monotone() -> Outcome {
    run(64, (any::<u64>(), 1e-9f64..0.9, 1e-9f64..0.9), |(seed, t1, t2)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = gaussian(&mut rng, 8, 8);
        let mut s = singular_values(t.as_ref()).unwrap();
        for (i, v) in s.iter_mut().enumerate() {
            *v *= 10f64.powi(-(i as i32));
        }
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let r_lo = select_order(&s, &s, lo).unwrap();
        let r_hi = select_order(&s, &s, hi).unwrap();
        prop_assert!(r_lo >= r_hi);
        prop_assert!(residual_energy(&s, r_hi) <= hi);
        if r_hi > 1 {
            prop_assert!(residual_energy(&s, r_hi - 1) > hi);
        }
        Ok(())
    })
}

pub fn scaling_and_transpose() -> Outcome {
    run(64, (any::<u64>(), 0.1f64..10.0, 0.01f64..100.0), |(seed, c, omega)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_system(&mut rng, 5, 3, 2);
        let p = EvalPoint::imag(omega);
        let h = eval_transfer(&model, &p).unwrap();
        let scaled = eval_transfer(&rescale_alpha(&model, 2, c).unwrap(), &p).unwrap();
        let t = eval_transfer(&transpose_map(&model), &p).unwrap();
        let tol = 1e-12 * fro(h.as_ref());
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((scaled[(i, j)] - h[(i, j)]).norm() <= tol);
                prop_assert!((t[(j, i)] - h[(i, j)]).norm() <= tol);
            }
        }
        Ok(())
    })
}

pub fn realify_round_trip() -> Outcome {
    run(24, (any::<u64>(), 1usize..5), |(seed, pairs)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_system(&mut rng, 12, 3, 1);
        let samples = conjugate_closed(&mut rng, &model, pairs);
        let complex = intrusive_oracle(&model, &samples).unwrap().model;
        let real = realify(&complex, &samples).unwrap();
        prop_assert!(real.is_real());
        prop_assert_eq!(realify(&real, &samples).unwrap(), real.clone());
        let at = |m: &StructuredModel, p: &EvalPoint| eval_transfer_capped(m, p, f64::INFINITY).unwrap()[(0, 0)];
        for p in &samples.points {
            prop_assert!(rel(at(&real, p), at(&complex, p)) <= 1e-8, "{:?}", p);
        }
        // away from the samples, agreement is limited by the pencil's conditioning
        for omega in [0.05, 0.7, 3.0, 40.0] {
            let p = EvalPoint::imag(omega);
            let cond = FactoredPencil::new(complex.pencil(&p).unwrap().as_ref()).condition;
            let tol = 1e-8f64.max(64.0 * f64::EPSILON * cond);
            let err = rel(at(&real, &p), at(&complex, &p));
            prop_assert!(err <= tol, "omega {}: {:e} > {:e}", omega, err, tol);
        }
        // reductions of a real model stay real
        let (reduced, _) = project(&real, Order::Fixed(samples.len())).unwrap();
        prop_assert!(reduced.is_real());
        Ok(())
    })
}

pub fn files_round_trip() -> Outcome {
    run(24, (any::<u64>(), 1usize..3, 1usize..6), |(seed, io, count)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut model = random_system(&mut rng, 4, 3, io);
        model.a[1][(0, 1)] = cx(f64::MIN_POSITIVE, -1.0 / 3.0);
        let samples = random_samples(&mut rng, &model, count);
        let dir = tempfile::tempdir().unwrap();
        let (mp, sp) = (dir.path().join("m.json"), dir.path().join("s.json"));
        write_model(&mp, &model).unwrap();
        write_samples(&sp, &samples).unwrap();
        prop_assert_eq!(read_model(&mp).unwrap(), model);
        prop_assert_eq!(read_samples(&sp).unwrap(), samples);
        let config = SolverConfig { lambda0: 1.0 / 7.0, seed, ..SolverConfig::for_mode(SolverMode::EqWeights) };
        for name in ["c.toml", "c.json"] {
            let p = dir.path().join(name);
            write_config(&p, &config).unwrap();
            prop_assert_eq!(read_config(&p).unwrap(), config.clone());
        }
        Ok(())
    })
}

pub fn seed_determinism() -> Outcome {
    run(6, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_system(&mut rng, 6, 3, 1);
        let samples = random_samples(&mut rng, &model, 4);
        let sys = assemble_constraints(&samples, &model.alphas, false).unwrap();
        let config = SolverConfig { outer_iters: 2, ..SolverConfig::reweighted() }.with_inner_iters(300).with_seed(seed);
        let a = solve_rsmi(&sys, &config).unwrap();
        let b = solve_rsmi(&sys, &config).unwrap();
        prop_assert_eq!(&a, &b);
        let other = solve_rsmi(&sys, &config.clone().with_seed(seed.wrapping_add(1))).unwrap();
        prop_assert!(other.a != a.a);
        Ok(())
    })
}

pub const ALL: [(&str, fn() -> Outcome); 8] = [
    ("weighted nuclear norm homogeneity", wnn_homogeneity),
    ("unit weights give classical norms", unit_weights_classical),
    ("objective convexity midpoint", convex_midpoint),
    ("select_order monotonicity", select_order_monotone),
    ("coefficient scaling and transpose invariance", scaling_and_transpose),
    ("realify round trip", realify_round_trip),
    ("file format round trips", files_round_trip),
    ("seed determinism", seed_determinism),
];
