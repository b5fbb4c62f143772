//! Two-input two-output data fitted through tangential interpolation.

use faer::Mat;
use rankfit::benchmarks::{gen_delay_rod, sample_frequencies};
use rankfit::compression::{project, Order};
use rankfit::harness::{evaluate, fit, ErrorMetric};
use rankfit::linalg::cx;
use rankfit::model::StructuredModel;
use rankfit::optimizer::SolverConfig;

fn main() -> rankfit::Result<()> {
    let rod = gen_delay_rod(21, 1.0)?.model;
    let nodes = [4, 15];
    let b = Mat::from_fn(21, 2, |i, j| cx(if i == nodes[j] { 1.0 } else { 0.0 }, 0.0));
    let c = b.transpose().to_owned();
    let truth = StructuredModel::new(rod.alphas.clone(), rod.a.clone(), b, c, true)?;

    let train = sample_frequencies(&truth, 16, 0.1, 1e3, false)?.with_canonical_directions();
    let test = sample_frequencies(&truth, 60, 0.1, 1e3, false)?;
    println!("{} samples of a {}x{} response", train.len(), train.outputs(), train.inputs());

    let outcome = fit(&train, &truth.alphas, false, false, &SolverConfig::reweighted().with_inner_iters(4000))?;
    for r in [2, 4, 6] {
        let (model, _) = project(&outcome.full_model, Order::Fixed(r))?;
        let e = evaluate(&model, &test, ErrorMetric::Relative)?;
        println!("order {r}: median relative error {:.2e}", e.median_error);
    }
    Ok(())
}
