//! End to end: fit the one-state delay system from two samples by reweighted
//! rank minimization and compress to order one.
//!
//! Two interpolation values do not pin down the three coefficients of a
//! one-state delay model, so the rank-one solution found interpolates the
//! samples but is in general a different member of that family than the
//! system that produced the data.

use rankfit::benchmarks::{gen_scalar_delay, log_space};
use rankfit::compression::{compress, stacked_svds, Order};
use rankfit::constraints::assemble_constraints;
use rankfit::model::{eval_transfer, EvalPoint};
use rankfit::optimizer::{solve_rsmi, SolverConfig};

fn main() -> rankfit::Result<()> {
    let (gt, samples) = gen_scalar_delay()?;
    let system = assemble_constraints(&samples, &gt.model.alphas, false)?;
    let state = solve_rsmi(&system, &SolverConfig::reweighted())?;
    let last = state.final_row().expect("trace is never empty");
    println!("final objective {:.3e}, residual {:.3e} after {} steps", last.objective, last.residual_l2, last.step);

    let svd = stacked_svds(&state.a)?;
    println!("stacked singular values {:?}", svd.s1.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>());

    let (model, report) = compress(&state.a, &system, &gt.model.alphas, Order::Fixed(1))?;
    println!("order-1 model keeps {:.8} of the spectrum", report.energy_h);
    let bc = model.b[(0, 0)] * model.c[(0, 0)];
    let coeffs: Vec<String> = model.a.iter().map(|a| format!("{:.4}", (a[(0, 0)] / bc).re)).collect();
    println!("order-1 denominator coefficients (s, 1, e^-s): {} (true: 1, 1, -0.25)", coeffs.join(", "));
    for (p, h) in samples.points.iter().zip(&samples.responses) {
        let g = eval_transfer(&model, p)?;
        println!("  at sample {p}: relative error {:.2e}", (g[(0, 0)] - h[(0, 0)]).norm() / h[(0, 0)].norm());
    }
    let worst = log_space(1e-2, 1e2, 50)
        .into_iter()
        .map(|w| {
            let p = EvalPoint::imag(w);
            let h = eval_transfer(&gt.model, &p).and_then(|h| Ok((h, eval_transfer(&model, &p)?)));
            h.map(|(h, g)| (h[(0, 0)] - g[(0, 0)]).norm() / h[(0, 0)].norm())
        })
        .collect::<rankfit::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("max relative error on [1e-2, 1e2]i: {worst:.2e}");
    Ok(())
}
