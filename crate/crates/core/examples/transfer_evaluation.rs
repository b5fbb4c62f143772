//! Evaluate a structured transfer function `H(s) = C (Σ αᵢ(s) Aᵢ)⁻¹ B`.
//!
//! Builds the scalar delay system `1/(s + 1 − 0.25e^{−s})` and a small delay
//! rod, evaluates both on the imaginary axis and checks the scaling
//! invariance `(c·αᵢ, Aᵢ/c)`.

use rankfit::benchmarks::{gen_delay_rod, scalar_delay_model};
use rankfit::model::{eval_transfer, rescale_alpha, transpose_map, EvalPoint};

fn main() -> rankfit::Result<()> {
    let scalar = scalar_delay_model();
    println!("scalar delay system, coefficients {:?}", scalar.alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>());
    for omega in [0.1, 1.0, 10.0] {
        let s = EvalPoint::imag(omega);
        let h = eval_transfer(&scalar, &s)?[(0, 0)];
        let closed = 1.0 / (rankfit::c64::new(0.0, omega) + 1.0 - 0.25 * rankfit::c64::new(0.0, -omega).exp());
        println!("  H({omega:>5}i) = {h:.6}   closed form {closed:.6}");
    }

    let rod = gen_delay_rod(31, 1.0)?;
    println!("{} (order {})", rod.description, rod.model.order());
    let p = EvalPoint::imag(3.0);
    let h = eval_transfer(&rod.model, &p)?[(0, 0)];
    let scaled = rescale_alpha(&rod.model, 2, 10.0)?;
    let hs = eval_transfer(&scaled, &p)?[(0, 0)];
    let ht = eval_transfer(&transpose_map(&rod.model), &p)?[(0, 0)];
    println!("  H(3i) = {h:.6e}");
    println!("  after rescaling the delay term by 10: {hs:.6e} (difference {:.1e})", (h - hs).norm());
    println!("  transposed realization:               {ht:.6e}");
    Ok(())
}
