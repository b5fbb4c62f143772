//! The relaxed objective
//!
//! ```text
//! J = λ‖[A₁ … A_q]‖_w,* + λ‖[A₁; …; A_q]‖_w,* + ‖R₁‖ + ‖R₂‖,   ‖R‖ = Σ|Rⱼₖ| + Σ|Rⱼₖ|²
//! ```
//!
//! and its gradient. In symmetric mode the variables are `Kᵢ` with
//! `Aᵢ = Kᵢ + Kᵢᵀ`; both stacks then share one spectrum and both residuals
//! coincide, so a single stack term and a single residual are used.
//!
//! Gradients follow the conjugate-variable convention: for a real function
//! `f` of complex `z = x + iy` the returned entry is `∂f/∂x + i·∂f/∂y`.

use faer::Mat;

use super::config::SpectralRoute;
use super::wnn::stack_term;
use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::linalg::{c64, convert, Field};

/// Relative weights of the `ℓ1` and squared `ℓ2` parts of the residual norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNorm {
    pub l1: f64,
    pub l2: f64,
}

impl Default for ResidualNorm {
    fn default() -> Self {
        ResidualNorm { l1: 1.0, l2: 1.0 }
    }
}

/// A constraint system cast to the working field.
#[derive(Debug, Clone)]
pub(crate) struct Problem<T: Field> {
    pub n: usize,
    pub lambdas: Vec<Vec<T>>,
    pub rhs_right: Mat<T>,
    pub rhs_left: Mat<T>,
    pub symmetric: bool,
    pub gram: bool,
    pub norm: ResidualNorm,
    pub pairing: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) struct Evaluation<T: Field> {
    pub value: f64,
    /// `sqrt(‖R₁‖²_F + ‖R₂‖²_F)` (just `‖R₁‖_F` in symmetric mode).
    pub residual_l2: f64,
    /// Sum of the weighted nuclear norms, before scaling by `λ`.
    pub wnn: f64,
    pub grad: Vec<Mat<T>>,
}

impl<T: Field> Problem<T> {
    pub fn new(system: &ConstraintSystem, route: SpectralRoute, norm: ResidualNorm) -> Self {
        Problem {
            n: system.n(),
            lambdas: system.lambdas.iter().map(|d| d.iter().map(|z| T::from_c64(*z)).collect()).collect(),
            rhs_right: convert(system.rhs_right.as_ref()),
            rhs_left: convert(system.rhs_left.as_ref()),
            symmetric: system.symmetric,
            gram: route.use_gram(system.n()),
            norm,
            pairing: system.pairing.clone(),
        }
    }

    pub fn q(&self) -> usize {
        self.lambdas.len()
    }

    /// Averages each variable with its conjugate mirror `P conj(X) P`.
    pub fn project_conjugate_symmetric(&self, x: &mut [Mat<T>]) {
        let Some(p) = &self.pairing else { return };
        for m in x.iter_mut() {
            let mirror = Mat::from_fn(self.n, self.n, |j, k| m[(p[j], p[k])].cj());
            *m = Mat::from_fn(self.n, self.n, |j, k| (m[(j, k)] + mirror[(j, k)]).scale(0.5));
        }
    }

    /// The model matrices `Aᵢ` for variables `x`.
    pub fn matrices(&self, x: &[Mat<T>]) -> Vec<Mat<T>> {
        if self.symmetric {
            x.iter().map(|k| k + k.transpose()).collect()
        } else {
            x.to_vec()
        }
    }

    fn residual_term(&self, r: &Mat<T>, g: &mut Mat<T>) -> (f64, f64) {
        let (l1, l2) = (self.norm.l1, self.norm.l2);
        let mut abs = 0.0;
        let mut sq = 0.0;
        for k in 0..self.n {
            for j in 0..self.n {
                let z = r[(j, k)];
                abs += z.modulus();
                sq += z.modulus_sqr();
                g[(j, k)] = z.unit().scale(l1) + z.scale(2.0 * l2);
            }
        }
        (l1 * abs + l2 * sq, sq)
    }

    pub fn evaluate(&self, x: &[Mat<T>], lambda: f64, w: &[f64]) -> Result<Evaluation<T>> {
        let n = self.n;
        let q = self.q();
        if x.len() != q || x.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::Dimension(format!("expected {q} matrices of size {n}x{n}")));
        }
        if w.len() < n {
            return Err(Error::InvalidArgument(format!("weight vector has {} entries, need {n}", w.len())));
        }
        let a = self.matrices(x);

        let mut r1 = Mat::<T>::zeros(n, n);
        let mut r2 = Mat::<T>::zeros(n, n);
        for k in 0..n {
            for j in 0..n {
                let mut acc1 = -self.rhs_right[(j, k)];
                let mut acc2 = -self.rhs_left[(j, k)];
                for (ai, lam) in a.iter().zip(&self.lambdas) {
                    acc1 = acc1 + ai[(j, k)] * lam[k];
                    acc2 = acc2 + ai[(k, j)] * lam[k];
                }
                r1[(j, k)] = acc1;
                r2[(j, k)] = acc2;
            }
        }
        let mut g1 = Mat::<T>::zeros(n, n);
        let mut g2 = Mat::<T>::zeros(n, n);
        let (res1, sq1) = self.residual_term(&r1, &mut g1);
        let (res2, sq2) = if self.symmetric { (0.0, 0.0) } else { self.residual_term(&r2, &mut g2) };
        if !(res1 + res2).is_finite() {
            return Err(Error::NonFinite { term: "residual" });
        }

        let mut grad: Vec<Mat<T>> = Vec::with_capacity(q);
        for lam in &self.lambdas {
            let cl: Vec<T> = lam.iter().map(|z| z.cj()).collect();
            let mut g = Mat::from_fn(n, n, |j, k| g1[(j, k)] * cl[k]);
            if !self.symmetric {
                for k in 0..n {
                    for j in 0..n {
                        g[(k, j)] = g[(k, j)] + g2[(j, k)] * cl[k];
                    }
                }
            }
            grad.push(g);
        }

        let mut wnn = 0.0;
        if lambda != 0.0 {
            let (vh, gh) = stack_term(&a, w, true, self.gram)?;
            wnn += vh;
            for (g, s) in grad.iter_mut().zip(&gh) {
                *g += s * faer::Scale(T::from_c64(c64::new(lambda, 0.0)));
            }
            if !self.symmetric {
                let (vv, gv) = stack_term(&a, w, false, self.gram)?;
                wnn += vv;
                for (g, s) in grad.iter_mut().zip(&gv) {
                    *g += s * faer::Scale(T::from_c64(c64::new(lambda, 0.0)));
                }
            }
            if !wnn.is_finite() {
                return Err(Error::NonFinite { term: "weighted nuclear norm" });
            }
        }

        if self.symmetric {
            grad = grad.iter().map(|g| g + g.transpose()).collect();
        }
        Ok(Evaluation { value: lambda * wnn + res1 + res2, residual_l2: (sq1 + sq2).sqrt(), wnn, grad })
    }
}

fn complex_problem(system: &ConstraintSystem, norm: ResidualNorm) -> Problem<c64> {
    Problem::new(system, SpectralRoute::Svd, norm)
}

/// `J` at `a` (the `Kᵢ` in symmetric mode).
pub fn objective(system: &ConstraintSystem, a: &[Mat<c64>], lambda: f64, w: &[f64]) -> Result<f64> {
    objective_with_norm(system, a, lambda, w, ResidualNorm::default())
}

pub fn objective_with_norm(system: &ConstraintSystem, a: &[Mat<c64>], lambda: f64, w: &[f64], norm: ResidualNorm) -> Result<f64> {
    Ok(complex_problem(system, norm).evaluate(a, lambda, w)?.value)
}

/// Gradient of [`objective`] with respect to each variable.
pub fn objective_gradient(system: &ConstraintSystem, a: &[Mat<c64>], lambda: f64, w: &[f64]) -> Result<Vec<Mat<c64>>> {
    objective_gradient_with_norm(system, a, lambda, w, ResidualNorm::default())
}

pub fn objective_gradient_with_norm(
    system: &ConstraintSystem,
    a: &[Mat<c64>],
    lambda: f64,
    w: &[f64],
    norm: ResidualNorm,
) -> Result<Vec<Mat<c64>>> {
    Ok(complex_problem(system, norm).evaluate(a, lambda, w)?.grad)
}

/// Real-arithmetic evaluation for exactly real systems; used by tests that
/// compare the two code paths.
#[cfg(test)]
pub(crate) fn evaluate_real(system: &ConstraintSystem, a: &[Mat<c64>], lambda: f64, w: &[f64]) -> Result<(f64, Vec<Mat<c64>>)> {
    let p: Problem<f64> = Problem::new(system, SpectralRoute::Svd, ResidualNorm::default());
    let x: Vec<Mat<f64>> = a.iter().map(|m| convert(m.as_ref())).collect();
    let e = p.evaluate(&x, lambda, w)?;
    Ok((e.value, e.grad.iter().map(|g| convert(g.as_ref())).collect()))
}
