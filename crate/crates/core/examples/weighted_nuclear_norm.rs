//! Weighted nuclear norm, its gradient and the reweighting rule.

use faer::Mat;
use rankfit::linalg::{cx, singular_values};
use rankfit::optimizer::{update_weights, weighted_nuclear_norm, wnn_gradient};

fn main() -> rankfit::Result<()> {
    // A nearly rank-two matrix.
    let t = Mat::from_fn(4, 6, |i, j| {
        let (x, y) = (i as f64, j as f64);
        cx(1.0 + x * y, 0.5 * (x - y)) + cx(1e-4 * ((i * 7 + j * 3) % 5) as f64, 0.0)
    });
    let s = singular_values(t.as_ref())?;
    println!("singular values: {:?}", s.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>());

    let ones = vec![1.0; s.len()];
    println!("nuclear norm:            {:.6}", weighted_nuclear_norm(t.as_ref(), &ones)?);

    let w = update_weights(&s, 1e-12, 1e4)?;
    println!("reweighted weights:      {:?}", w.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>());
    println!("weighted nuclear norm:   {:.6} (= rank surrogate)", weighted_nuclear_norm(t.as_ref(), &w)?);

    let g = wnn_gradient(t.as_ref(), &w)?;
    let s_g = singular_values(g.as_ref())?;
    println!("gradient singular values equal the weights: {:?}", s_g.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>());
    Ok(())
}
