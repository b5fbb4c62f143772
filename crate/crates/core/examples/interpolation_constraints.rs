//! Assemble the generalized Sylvester interpolation constraints of a sample
//! set and check them on a known solution.
//!
//! The scalar delay system sampled at σ = 0.5 and 1 admits the rank-one
//! solution `Aᵢ = aᵢ h hᵀ`, with `aᵢ` the true scalar coefficients and `h`
//! the sampled responses. Its sample-indexed model has a singular pencil, but
//! compressing it to order one recovers the true system.

use faer::Mat;
use rankfit::benchmarks::gen_scalar_delay;
use rankfit::compression::{full_order_model, numerical_rank_rmin, project, Order};
use rankfit::constraints::{assemble_constraints, residuals};
use rankfit::linalg::{cx, fro};
use rankfit::model::{eval_transfer, EvalPoint};

fn main() -> rankfit::Result<()> {
    let (gt, samples) = gen_scalar_delay()?;
    let system = assemble_constraints(&samples, &gt.model.alphas, false)?;
    println!("{} samples, {} coefficient functions", system.n(), system.q());
    for i in 0..system.q() {
        let d: Vec<String> = (0..system.n()).map(|j| format!("{:.4}", system.lambdas[i][j].re)).collect();
        println!("  Λ{} = diag({})", i + 1, d.join(", "));
    }

    let h: Vec<_> = samples.responses.iter().map(|r| r[(0, 0)]).collect();
    let coeff = [1.0, 1.0, -0.25];
    let a: Vec<Mat<rankfit::c64>> =
        coeff.iter().map(|&c| Mat::from_fn(2, 2, |j, k| h[j] * h[k] * cx(c, 0.0))).collect();
    let (r1, r2) = residuals(&system, &a)?;
    println!("residual norms: {:.2e}, {:.2e}", fro(r1.as_ref()), fro(r2.as_ref()));
    println!("numerical rank: {}", numerical_rank_rmin(&a, 1e-12)?);

    let full = full_order_model(&a, &system, &gt.model.alphas)?;
    let (model, _) = project(&full, Order::Fixed(1))?;
    for omega in [0.1, 1.0, 10.0] {
        let p = EvalPoint::imag(omega);
        let (g, h) = (eval_transfer(&model, &p)?, eval_transfer(&gt.model, &p)?);
        println!("  order-1 model vs truth at {omega}i: {:.2e}", (g[(0, 0)] - h[(0, 0)]).norm() / h[(0, 0)].norm());
    }
    Ok(())
}
