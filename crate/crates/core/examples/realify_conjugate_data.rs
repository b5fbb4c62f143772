//! Fit to conjugate-closed data and convert the result to a real model.

use rankfit::benchmarks::{gen_delay_rod, sample_frequencies};
use rankfit::compression::{project, realify, Order};
use rankfit::harness::{evaluate, fit, ErrorMetric};
use rankfit::optimizer::SolverConfig;

fn main() -> rankfit::Result<()> {
    let gt = gen_delay_rod(31, 1.0)?;
    let train = sample_frequencies(&gt.model, 6, 0.1, 100.0, true)?;
    let test = sample_frequencies(&gt.model, 40, 0.01, 1e3, false)?;
    println!("{} conjugate-closed training samples", train.len());

    let outcome = fit(&train, &gt.model.alphas, false, false, &SolverConfig::reweighted().with_inner_iters(4000))?;
    println!("fitted model is real: {}", outcome.full_model.is_real());
    let real = realify(&outcome.full_model, &train)?;
    println!("after realification:  {}", real.is_real());

    let (reduced, report) = project(&real, Order::Fixed(3))?;
    println!("order-3 reduction is real: {}, energy kept {:.6}", reduced.is_real(), report.energy_h);
    let e = evaluate(&reduced, &test, ErrorMetric::Relative)?;
    println!("median relative test error {:.2e}", e.median_error);
    Ok(())
}
