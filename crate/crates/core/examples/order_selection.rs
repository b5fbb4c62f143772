//! Choosing the reduced order from the stacked singular values.

use faer::Mat;
use rankfit::compression::{numerical_rank_rmin, residual_energy, select_order};
use rankfit::linalg::cx;

fn main() -> rankfit::Result<()> {
    let decay = [1.0, 0.3, 0.05, 1e-3, 1e-6, 1e-9];
    for tol in [1e-1, 1e-2, 1e-3, 1e-6] {
        let r = select_order(&decay, &decay, tol)?;
        println!("tol {tol:>7.0e} -> order {r} (residual energy {:.2e})", residual_energy(&decay, r));
    }

    // Three matrices sharing a rank-two column and row space.
    let u = |i: usize| [1.0 + i as f64, (i as f64).sin()];
    let a: Vec<Mat<rankfit::c64>> = (0..3)
        .map(|k| Mat::from_fn(6, 6, |i, j| cx(u(i)[0] * u(j)[0] * (k + 1) as f64 + u(i)[1] * u(j)[1], 0.0)))
        .collect();
    println!("numerical rank of the family: {}", numerical_rank_rmin(&a, 1e-8)?);
    Ok(())
}
