//! Fitting externally measured data: read a sample file, normalize the
//! responses, and learn a second-order model with scaled coefficients
//! `(γ_M s², γ_D s, 1)`.

use faer::Mat;
use rankfit::benchmarks::sample_frequencies;
use rankfit::compression::{project, Order};
use rankfit::harness::{evaluate, fit, ErrorMetric};
use rankfit::io::{read_samples, write_samples};
use rankfit::linalg::cx;
use rankfit::model::{second_order_alphas, StructuredModel, DEFAULT_GAMMA_D, DEFAULT_GAMMA_M};
use rankfit::optimizer::SolverConfig;

fn chain(n: usize) -> rankfit::Result<StructuredModel> {
    let tri = |d: f64, o: f64| Mat::from_fn(n, n, |i, j| cx(if i == j { d } else if i.abs_diff(j) == 1 { o } else { 0.0 }, 0.0));
    let m = tri(1.0, 0.0);
    let d = tri(0.4, -0.1);
    let k = tri(200.0, -100.0);
    let b = Mat::from_fn(n, 1, |i, _| cx(if i == 0 { 1.0 } else { 0.0 }, 0.0));
    let c = Mat::from_fn(1, n, |_, j| cx(if j == n - 1 { 1.0 } else { 0.0 }, 0.0));
    let a = vec![&m * faer::Scale(cx(1.0 / DEFAULT_GAMMA_M, 0.0)), &d * faer::Scale(cx(1.0 / DEFAULT_GAMMA_D, 0.0)), k];
    StructuredModel::new(second_order_alphas(DEFAULT_GAMMA_M, DEFAULT_GAMMA_D)?, a, b, c, false)
}

fn main() -> rankfit::Result<()> {
    let truth = chain(6)?;
    let path = std::env::temp_dir().join("rankfit-measured.json");
    write_samples(&path, &sample_frequencies(&truth, 24, 1.0, 40.0, false)?)?;

    let data = read_samples(&path)?;
    println!("read {} samples, max |H| = {:.3e}", data.len(), data.max_abs());
    let test = sample_frequencies(&truth, 80, 1.0, 40.0, false)?;
    let config = SolverConfig { lr0: 1e-2, ..SolverConfig::reweighted() }.with_inner_iters(4000);
    let outcome = fit(&data, &truth.alphas, false, true, &config)?;
    println!("responses were divided by {:.3e} before fitting", outcome.scale);
    for r in [4, 6, 8] {
        let (model, _) = project(&outcome.full_model, Order::Fixed(r))?;
        println!("order {r}: median relative error {:.2e}", evaluate(&model, &test, ErrorMetric::Relative)?.median_error);
    }
    Ok(())
}
