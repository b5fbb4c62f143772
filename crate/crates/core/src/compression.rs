//! Compression of a constraint solution to a low-order model by projection
//! onto dominant subspaces of the stacked matrices, numerical rank, and
//! realification of conjugate-symmetric models.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::linalg::{c64, cx, fro, hstack, imag_ratio, singular_values, thin_svd, vstack};
use crate::model::{AlphaFunction, StructuredModel};
use crate::samples::SampleSet;

/// Default relative threshold of [`numerical_rank_rmin`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Imaginary parts tolerated (relative to the norm) before [`realify`] truncates them.
const REALIFY_TOL: f64 = 1e-8;

/// Thin SVDs of `[A₁ … A_q] = U₁Σ₁V₁ᴴ` and `[A₁; …; A_q] = U₂Σ₂V₂ᴴ`.
#[derive(Debug, Clone)]
pub struct StackedSvds {
    pub u1: Mat<c64>,
    pub s1: Vec<f64>,
    pub v1: Mat<c64>,
    pub u2: Mat<c64>,
    pub s2: Vec<f64>,
    pub v2: Mat<c64>,
}

pub fn stacked_svds(a: &[Mat<c64>]) -> Result<StackedSvds> {
    check_square_family(a)?;
    let h = thin_svd(hstack(a).as_ref())?;
    let v = thin_svd(vstack(a).as_ref())?;
    Ok(StackedSvds { u1: h.u, s1: h.s, v1: h.v, u2: v.u, s2: v.s, v2: v.v })
}

fn check_square_family(a: &[Mat<c64>]) -> Result<usize> {
    let first = a.first().ok_or_else(|| Error::InvalidArgument("no matrices given".into()))?;
    let n = first.nrows();
    for (i, m) in a.iter().enumerate() {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension(format!("A{i} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
        }
    }
    Ok(n)
}

/// Energy left out when keeping the leading `r` values: `1 − Σ_{i≤r} γᵢ / Σ γᵢ`.
pub fn residual_energy(s: &[f64], r: usize) -> f64 {
    let total: f64 = s.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let kept: f64 = s.iter().take(r).sum();
    (1.0 - kept / total).max(0.0)
}

/// Smallest `r ≥ 1` whose residual energy in both spectra is at most `tol`.
pub fn select_order(s1: &[f64], s2: &[f64], tol: f64) -> Result<usize> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::InvalidArgument("empty singular value spectrum".into()));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    let n = s1.len().max(s2.len());
    Ok((1..=n)
        .find(|&r| residual_energy(s1, r).max(residual_energy(s2, r)) <= tol)
        .unwrap_or(n))
}

/// Target order of [`compress`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Fixed(usize),
    Tolerance(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionReport {
    pub sv_horizontal: Vec<f64>,
    pub sv_vertical: Vec<f64>,
    pub selected_order: usize,
    /// The requested tolerance, or for a fixed order the residual energy it leaves.
    pub tol_used: f64,
    /// Fraction of the horizontal spectrum kept at the selected order.
    pub energy_h: f64,
    pub energy_v: f64,
}

/// The model indexed by the samples: `(Σ αᵢ Āᵢ, b_block, c_block)`, which
/// interpolates the data whenever `Āᵢ` satisfy the constraints.
pub fn full_order_model(a: &[Mat<c64>], system: &ConstraintSystem, alphas: &[AlphaFunction]) -> Result<StructuredModel> {
    system.check_variables(a)?;
    if alphas.len() != a.len() {
        return Err(Error::Dimension(format!("{} coefficient functions for {} matrices", alphas.len(), a.len())));
    }
    let mut a = a.to_vec();
    if system.symmetric {
        a = a.iter().map(|m| (m + m.transpose()) * faer::Scale(cx(0.5, 0.0))).collect();
    }
    StructuredModel::new(alphas.to_vec(), a, system.b_block.clone(), system.c_block.clone(), system.symmetric)
}

/// Projects a model onto the dominant subspaces of its stacked matrices:
/// `W = U₁⁽ʳ⁾`, `V = V₂⁽ʳ⁾`, `Ãᵢ = WᴴAᵢV`, `B̃ = WᴴB`, `C̃ = CV`.
///
/// Symmetric models use `V = conj(W)`, so the reduced matrices stay
/// symmetric (for real data this is `V = W`).
pub fn project(model: &StructuredModel, order: Order) -> Result<(StructuredModel, CompressionReport)> {
    let n = check_square_family(&model.a)?;
    let svds = stacked_svds(&model.a)?;
    let (r, tol_used) = match order {
        Order::Fixed(r) => {
            if r == 0 || r > n {
                return Err(Error::InvalidArgument(format!("order {r} outside 1..={n}")));
            }
            (r, residual_energy(&svds.s1, r).max(residual_energy(&svds.s2, r)))
        }
        Order::Tolerance(tol) => (select_order(&svds.s1, &svds.s2, tol)?, tol),
    };
    let w = svds.u1.get(.., ..r).to_owned();
    let v = if model.symmetric { w.conjugate().to_owned() } else { svds.v2.get(.., ..r).to_owned() };
    let mut a: Vec<Mat<c64>> = model.a.iter().map(|m| w.adjoint() * m * &v).collect();
    if model.symmetric {
        a = a.iter().map(|m| (m + m.transpose()) * faer::Scale(cx(0.5, 0.0))).collect();
    }
    let b = w.adjoint() * &model.b;
    let c = &model.c * &v;
    let reduced = StructuredModel::new(model.alphas.clone(), a, b, c, model.symmetric)?;
    let report = CompressionReport {
        energy_h: 1.0 - residual_energy(&svds.s1, r),
        energy_v: 1.0 - residual_energy(&svds.s2, r),
        sv_horizontal: svds.s1,
        sv_vertical: svds.s2,
        selected_order: r,
        tol_used,
    };
    Ok((reduced, report))
}

/// Builds the sample-indexed model of a solution and projects it.
pub fn compress(
    a: &[Mat<c64>],
    system: &ConstraintSystem,
    alphas: &[AlphaFunction],
    order: Order,
) -> Result<(StructuredModel, CompressionReport)> {
    project(&full_order_model(a, system, alphas)?, order)
}

/// Minimum over both stacks of the number of singular values above `rel_tol·γ₁`.
pub fn numerical_rank_rmin(a: &[Mat<c64>], rel_tol: f64) -> Result<usize> {
    check_square_family(a)?;
    let count = |s: Vec<f64>| {
        let top = s.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            0
        } else {
            s.iter().filter(|&&x| x > rel_tol * top).count()
        }
    };
    let h = count(singular_values(hstack(a).as_ref())?);
    let v = count(singular_values(vstack(a).as_ref())?);
    Ok(h.min(v))
}

/// Turns a conjugate-symmetric sample-indexed model into an equivalent real
/// one. The model must be indexed by `samples` (order `N`), for example the
/// output of [`full_order_model`] or of the intrusive oracle on
/// conjugate-closed data. A real model is returned unchanged.
///
/// Each conjugate pair `(j, k)` of state coordinates is mapped by the unitary
/// `(x_j, x_k) ↦ ((x_j + x_k)/√2, −i(x_j − x_k)/√2)`, which sends
/// `(z, z̄)` to `(√2 Re z, √2 Im z)`. Small asymmetries are removed by first
/// averaging the model with its conjugate mirror.
pub fn realify(model: &StructuredModel, samples: &SampleSet) -> Result<StructuredModel> {
    if model.is_real() {
        return Ok(model.clone());
    }
    if !samples.conjugate_closed {
        return Err(Error::ConjugatePairing("samples are not closed under conjugation".into()));
    }
    let n = model.order();
    if n != samples.len() {
        return Err(Error::InvalidArgument(format!(
            "realification needs the sample-indexed model of order {}, got order {n}",
            samples.len()
        )));
    }
    let p = samples.conjugate_pairing()?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut t = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        let k = p[j];
        if k == j {
            t[(j, j)] = cx(1.0, 0.0);
        } else if j < k {
            t[(j, j)] = cx(s, 0.0);
            t[(j, k)] = cx(s, 0.0);
            t[(k, j)] = cx(0.0, -s);
            t[(k, k)] = cx(0.0, s);
        }
    }
    let mirror_rows = |m: &Mat<c64>| Mat::from_fn(m.nrows(), m.ncols(), |i, c| (m[(i, c)] + m[(p[i], c)].conj()) * 0.5);
    let mirror_cols = |m: &Mat<c64>| Mat::from_fn(m.nrows(), m.ncols(), |r, i| (m[(r, i)] + m[(r, p[i])].conj()) * 0.5);
    let mirror_both = |m: &Mat<c64>| Mat::from_fn(n, n, |i, k| (m[(i, k)] + m[(p[i], p[k])].conj()) * 0.5);

    let to_real = |m: Mat<c64>, what: &str| -> Result<Mat<c64>> {
        let ratio = imag_ratio(m.as_ref());
        if ratio > REALIFY_TOL {
            return Err(Error::ConjugatePairing(format!("{what} keeps a relative imaginary part of {ratio:e}")));
        }
        Ok(Mat::from_fn(m.nrows(), m.ncols(), |i, j| cx(m[(i, j)].re, 0.0)))
    };
    let mut a = Vec::with_capacity(model.q());
    for (i, m) in model.a.iter().enumerate() {
        let avg = mirror_both(m);
        check_mirror(m, &avg, &format!("A{i}"))?;
        a.push(to_real(&t * avg * t.adjoint(), &format!("A{i}"))?);
    }
    let b_avg = mirror_rows(&model.b);
    check_mirror(&model.b, &b_avg, "B")?;
    let c_avg = mirror_cols(&model.c);
    check_mirror(&model.c, &c_avg, "C")?;
    let b = to_real(&t * b_avg, "B")?;
    let c = to_real(c_avg * t.adjoint(), "C")?;
    let symmetric = model.symmetric && a.iter().all(|m| fro((m - m.transpose()).as_ref()) <= 1e-12 * fro(m.as_ref()));
    StructuredModel::new(model.alphas.clone(), a, b, c, symmetric)
}

fn check_mirror(m: &Mat<c64>, avg: &Mat<c64>, what: &str) -> Result<()> {
    let dev = fro((m - avg).as_ref());
    if dev > REALIFY_TOL * fro(m.as_ref()).max(1e-300) {
        return Err(Error::ConjugatePairing(format!("{what} is not conjugate-symmetric (deviation {dev:e})")));
    }
    Ok(())
}
