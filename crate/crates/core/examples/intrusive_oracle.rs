//! Interpolatory Petrov-Galerkin projection of a known system, used as a
//! reference solution of the constraints.

use rankfit::benchmarks::{gen_delay_rod, intrusive_oracle, sample_frequencies};
use rankfit::constraints::{assemble_constraints, residuals};
use rankfit::linalg::fro;
use rankfit::model::{eval_transfer, eval_transfer_capped, EvalPoint};

fn main() -> rankfit::Result<()> {
    let gt = gen_delay_rod(51, 1.0)?;
    let samples = sample_frequencies(&gt.model, 8, 0.1, 100.0, false)?;
    let oracle = intrusive_oracle(&gt.model, &samples)?;
    println!("projected order {} from full order {}", oracle.model.order(), gt.model.order());

    let system = assemble_constraints(&samples, &gt.model.alphas, false)?;
    let (r1, r2) = residuals(&system, &oracle.model.a)?;
    let scale = fro(system.rhs_right.as_ref());
    println!("relative constraint residuals: {:.2e}, {:.2e}", fro(r1.as_ref()) / scale, fro(r2.as_ref()) / scale);

    // The sample-indexed pencil is badly conditioned, yet its transfer values are accurate.
    for (p, h) in samples.points.iter().zip(&samples.responses) {
        let g = eval_transfer_capped(&oracle.model, p, f64::INFINITY)?;
        println!("  {:>10.4}: |H - H_oracle|/|H| = {:.2e}", p.magnitude(), (g[(0, 0)] - h[(0, 0)]).norm() / h[(0, 0)].norm());
    }
    let off = EvalPoint::imag(5.0);
    let h = eval_transfer(&gt.model, &off)?[(0, 0)];
    let g = eval_transfer_capped(&oracle.model, &off, f64::INFINITY)?[(0, 0)];
    println!("between samples, at 5i: relative error {:.2e}", (g - h).norm() / h.norm());
    Ok(())
}
