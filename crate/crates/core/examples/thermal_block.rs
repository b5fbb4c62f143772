//! Parametric stationary problem: learn an affine model of the thermal
//! block output from a tensor grid of parameter samples.
//!
//! `cargo run --release --example thermal_block -- 3000` sets the inner
//! iterations.

use rankfit::compression::{project, Order};
use rankfit::harness::{evaluate, experiment_data, fit, ErrorMetric, Experiment, ReproduceOptions};
use rankfit::optimizer::SolverConfig;

fn main() -> rankfit::Result<()> {
    let inner = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3000);
    let data = experiment_data(Experiment::ThermalBlock, &ReproduceOptions::default())?;
    println!(
        "{}: {} train, {} validation, {} test points",
        data.ground_truth.description,
        data.train.len(),
        data.validation.as_ref().map_or(0, |v| v.len()),
        data.test.len()
    );
    let outcome = fit(&data.train, &data.ground_truth.model.alphas, false, false, &SolverConfig::reweighted().with_inner_iters(inner))?;
    for r in [2, 5, 10] {
        let (model, report) = project(&outcome.full_model, Order::Fixed(r))?;
        let e = evaluate(&model, &data.test, ErrorMetric::Relative)?;
        println!("order {r:>2}: energy kept {:.6}, median test error {:.2e}", report.energy_h, e.median_error);
    }
    Ok(())
}
