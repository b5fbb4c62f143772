//! Weighted nuclear norm `‖T‖_w,* = Σ wⱼ γⱼ` with `γ` descending.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eigen_desc, singular_values, thin_svd, Field};

/// Relative cutoff below which the Gram route drops a singular triple.
const GRAM_CUTOFF: f64 = 1e-7;

fn check_weights(w: &[f64], k: usize) -> Result<()> {
    if w.len() < k {
        return Err(Error::InvalidArgument(format!("weight vector has {} entries, need {k}", w.len())));
    }
    if let Some(x) = w.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::InvalidArgument(format!("weights must be nonnegative, got {x}")));
    }
    Ok(())
}

pub fn weighted_nuclear_norm(t: MatRef<'_, c64>, w: &[f64]) -> Result<f64> {
    check_weights(w, t.nrows().min(t.ncols()))?;
    let s = singular_values(t)?;
    Ok(s.iter().zip(w).map(|(s, w)| s * w).sum())
}

/// `U diag(w) Vᴴ` from the thin SVD; the gradient with respect to the
/// conjugate variable at points with distinct nonzero singular values, and a
/// subgradient element elsewhere.
pub fn wnn_gradient(t: MatRef<'_, c64>, w: &[f64]) -> Result<Mat<c64>> {
    let k = t.nrows().min(t.ncols());
    check_weights(w, k)?;
    let svd = thin_svd(t)?;
    Ok(scaled_outer(&svd.u, &svd.v, &w[..k]))
}

/// `wⱼ = min(max_val, 1/(sⱼ + ε))`.
pub fn update_weights(singular_values: &[f64], epsilon: f64, max_val: f64) -> Result<Vec<f64>> {
    if let Some(s) = singular_values.iter().find(|s| !(**s >= 0.0)) {
        return Err(Error::InvalidArgument(format!("singular values must be nonnegative, got {s}")));
    }
    Ok(singular_values.iter().map(|s| max_val.min(1.0 / (s + epsilon))).collect())
}

fn scaled_outer<T: Field>(u: &Mat<T>, v: &Mat<T>, w: &[f64]) -> Mat<T> {
    let k = w.len();
    let uw = Mat::from_fn(u.nrows(), k, |i, j| u[(i, j)].scale(w[j]));
    uw * v.get(.., ..k).adjoint()
}

/// Value and gradient of `‖[A₁ … A_q]‖_w,*` (horizontal) or
/// `‖[A₁; …; A_q]‖_w,*` (vertical), returned blockwise.
pub(crate) fn stack_term<T: Field>(a: &[Mat<T>], w: &[f64], horizontal: bool, gram: bool) -> Result<(f64, Vec<Mat<T>>)> {
    let n = a[0].nrows();
    if gram {
        let mut g = Mat::<T>::zeros(n, n);
        for ai in a {
            if horizontal {
                g += ai * ai.adjoint();
            } else {
                g += ai.adjoint() * ai;
            }
        }
        let (ev, q) = hermitian_eigen_desc(g.as_ref())?;
        let s: Vec<f64> = ev.iter().map(|e| e.max(0.0).sqrt()).collect();
        let value = s.iter().zip(w).map(|(s, w)| s * w).sum();
        let cut = GRAM_CUTOFF * s[0];
        let c: Vec<f64> = s.iter().zip(w).map(|(s, w)| w / s).collect();
        let keep = s.iter().take_while(|s| **s > cut).count();
        let qk = q.get(.., ..keep).to_owned();
        let m = scaled_outer(&qk, &qk, &c[..keep]);
        let grads = a.iter().map(|ai| if horizontal { &m * ai } else { ai * &m }).collect();
        return Ok((value, grads));
    }
    let stack = if horizontal { crate::linalg::hstack(a) } else { crate::linalg::vstack(a) };
    let svd = thin_svd(stack.as_ref())?;
    let value = svd.s.iter().zip(w).map(|(s, w)| s * w).sum();
    let g = scaled_outer(&svd.u, &svd.v, &w[..svd.s.len()]);
    let grads = (0..a.len())
        .map(|i| if horizontal { g.get(.., i * n..(i + 1) * n).to_owned() } else { g.get(i * n..(i + 1) * n, ..).to_owned() })
        .collect();
    Ok((value, grads))
}
