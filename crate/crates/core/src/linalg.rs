//! Dense complex linear-algebra helpers shared by the other modules.
//!
//! Everything is built on `faer` matrices of [`c64`]. The optimizer hot path
//! is generic over [`Field`] so that real-valued problems (parametric data)
//! run in real arithmetic.

use faer::linalg::solvers::{PartialPivLu, SolveCore};
use faer::{Conj, Mat, MatRef, Side};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use faer::c64;

/// Scalar field of an optimization problem: `f64` or [`c64`].
pub trait Field:
    faer::traits::ComplexField<Real = f64>
    + Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Number of real parameters per scalar.
    const PARTS: usize;

    fn zero_val() -> Self;
    fn from_c64(z: c64) -> Self;
    fn to_c64(self) -> c64;
    fn cj(self) -> Self;
    fn modulus(self) -> f64;
    fn modulus_sqr(self) -> f64;
    fn scale(self, r: f64) -> Self;
    fn re_part(self) -> f64;
    /// `z / |z|`, with 0 mapped to 0.
    fn unit(self) -> Self;
    fn write_parts(self, out: &mut [f64]);
    fn read_parts(parts: &[f64]) -> Self;
}

impl Field for f64 {
    const PARTS: usize = 1;

    fn zero_val() -> Self {
        0.0
    }
    fn from_c64(z: c64) -> Self {
        z.re
    }
    fn to_c64(self) -> c64 {
        c64::new(self, 0.0)
    }
    fn cj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn modulus_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn re_part(self) -> f64 {
        self
    }
    fn unit(self) -> Self {
        if self > 0.0 {
            1.0
        } else if self < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
    fn write_parts(self, out: &mut [f64]) {
        out[0] = self;
    }
    fn read_parts(parts: &[f64]) -> Self {
        parts[0]
    }
}

impl Field for c64 {
    const PARTS: usize = 2;

    fn zero_val() -> Self {
        c64::new(0.0, 0.0)
    }
    fn from_c64(z: c64) -> Self {
        z
    }
    fn to_c64(self) -> c64 {
        self
    }
    fn cj(self) -> Self {
        self.conj()
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn modulus_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn re_part(self) -> f64 {
        self.re
    }
    fn unit(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            c64::new(0.0, 0.0)
        } else {
            self / r
        }
    }
    fn write_parts(self, out: &mut [f64]) {
        out[0] = self.re;
        out[1] = self.im;
    }
    fn read_parts(parts: &[f64]) -> Self {
        c64::new(parts[0], parts[1])
    }
}

pub fn cx(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

pub fn convert<S: Field, T: Field>(m: MatRef<'_, S>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| T::from_c64(m[(i, j)].to_c64()))
}

pub fn real_to_complex(m: MatRef<'_, f64>) -> Mat<c64> {
    convert(m)
}

/// Frobenius norm.
pub fn fro<T: Field>(m: MatRef<'_, T>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].modulus_sqr();
        }
    }
    acc.sqrt()
}

/// Largest imaginary part relative to the Frobenius norm (0 for the zero matrix).
pub fn imag_ratio(m: MatRef<'_, c64>) -> f64 {
    let norm = fro(m);
    if norm == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].im.abs());
        }
    }
    worst / norm
}

pub fn is_exactly_real(m: MatRef<'_, c64>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].im == 0.0))
}

/// Plain (non-conjugating) transpose as an owned matrix.
pub fn transpose<T: Field>(m: MatRef<'_, T>) -> Mat<T> {
    m.transpose().to_owned()
}

pub fn hstack<T: Field>(mats: &[Mat<T>]) -> Mat<T> {
    let rows = mats.first().map_or(0, |m| m.nrows());
    let widths: Vec<usize> = mats.iter().map(|m| m.ncols()).collect();
    let total = widths.iter().sum();
    let mut out = Mat::<T>::zeros(rows, total);
    let mut offset = 0;
    for m in mats {
        out.as_mut().submatrix_mut(0, offset, rows, m.ncols()).copy_from(m.as_ref());
        offset += m.ncols();
    }
    out
}

pub fn vstack<T: Field>(mats: &[Mat<T>]) -> Mat<T> {
    let cols = mats.first().map_or(0, |m| m.ncols());
    let total = mats.iter().map(|m| m.nrows()).sum();
    let mut out = Mat::<T>::zeros(total, cols);
    let mut offset = 0;
    for m in mats {
        out.as_mut().submatrix_mut(offset, 0, m.nrows(), cols).copy_from(m.as_ref());
        offset += m.nrows();
    }
    out
}

/// Thin SVD with singular values in descending order.
#[derive(Debug, Clone)]
pub struct ThinSvd<T: Field> {
    pub u: Mat<T>,
    pub s: Vec<f64>,
    pub v: Mat<T>,
}

/// Thin SVD `m = U diag(s) Vᴴ`, singular values descending. Each left singular
/// vector is rotated so that its first entry of non-negligible size is real and
/// positive, with the matching right vector rotated alike.
pub fn thin_svd<T: Field>(m: MatRef<'_, T>) -> Result<ThinSvd<T>> {
    let k = m.nrows().min(m.ncols());
    if k == 0 {
        return Ok(ThinSvd { u: Mat::zeros(m.nrows(), 0), s: Vec::new(), v: Mat::zeros(m.ncols(), 0) });
    }
    let svd = m.thin_svd().map_err(|e| Error::Decomposition(format!("svd: {e:?}")))?;
    let mut u = svd.U().to_owned();
    let mut v = svd.V().to_owned();
    let s_diag = svd.S().column_vector();
    let s: Vec<f64> = (0..k).map(|i| s_diag[i].re_part().max(0.0)).collect();
    for j in 0..k {
        let col_max = (0..u.nrows()).map(|i| u[(i, j)].modulus()).fold(0.0, f64::max);
        let pivot = (0..u.nrows()).map(|i| u[(i, j)]).find(|x| x.modulus() > 1e-8 * col_max);
        if let Some(p) = pivot {
            let phase = p.unit().cj();
            for i in 0..u.nrows() {
                u[(i, j)] = u[(i, j)] * phase;
            }
            for i in 0..v.nrows() {
                v[(i, j)] = v[(i, j)] * phase;
            }
        }
    }
    Ok(ThinSvd { u, s, v })
}

/// Singular values, descending.
pub fn singular_values<T: Field>(m: MatRef<'_, T>) -> Result<Vec<f64>> {
    if m.nrows().min(m.ncols()) == 0 {
        return Ok(Vec::new());
    }
    let s = m.singular_values().map_err(|e| Error::Decomposition(format!("svd: {e:?}")))?;
    Ok(s.into_iter().map(|x| x.max(0.0)).collect())
}

/// Hermitian eigendecomposition with eigenvalues in descending order.
pub(crate) fn hermitian_eigen_desc<T: Field>(m: MatRef<'_, T>) -> Result<(Vec<f64>, Mat<T>)> {
    let n = m.nrows();
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Decomposition(format!("eigendecomposition: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let vals = (0..n).rev().map(|j| s[j].re_part()).collect();
    let vecs = Mat::from_fn(n, n, |i, j| u[(i, n - 1 - j)]);
    Ok((vals, vecs))
}

/// LU factorization of a square complex matrix together with a 1-norm
/// condition estimate.
pub struct FactoredPencil {
    lu: PartialPivLu<c64>,
    pub condition: f64,
}

impl FactoredPencil {
    pub fn new(m: MatRef<'_, c64>) -> Self {
        let lu = m.partial_piv_lu();
        let norm1 = (0..m.ncols())
            .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let inv_norm = inverse_norm1_estimate(&lu, m.nrows());
        let condition = if norm1 == 0.0 || !inv_norm.is_finite() { f64::INFINITY } else { norm1 * inv_norm };
        FactoredPencil { lu, condition }
    }

    pub fn solve(&self, rhs: MatRef<'_, c64>) -> Mat<c64> {
        let mut x = rhs.to_owned();
        self.lu.solve_in_place_with_conj(Conj::No, x.as_mut());
        x
    }

    /// Solves `Mᵀ x = rhs` (plain transpose).
    pub fn solve_transpose(&self, rhs: MatRef<'_, c64>) -> Mat<c64> {
        let mut x = rhs.to_owned();
        self.lu.solve_transpose_in_place_with_conj(Conj::No, x.as_mut());
        x
    }
}

/// Hager/Higham estimate of `‖M⁻¹‖₁` from an LU factorization.
fn inverse_norm1_estimate(lu: &PartialPivLu<c64>, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut x = Mat::<c64>::from_fn(n, 1, |_, _| cx(1.0 / n as f64, 0.0));
    let mut estimate = 0.0;
    let mut last_index = usize::MAX;
    for _ in 0..5 {
        let mut y = x.clone();
        lu.solve_in_place_with_conj(Conj::No, y.as_mut());
        estimate = (0..n).map(|i| y[(i, 0)].norm()).sum::<f64>();
        if !estimate.is_finite() {
            return f64::INFINITY;
        }
        let mut z = Mat::<c64>::from_fn(n, 1, |i, _| y[(i, 0)].unit());
        // z <- M^{-H} sign(y)
        lu.solve_transpose_in_place_with_conj(Conj::Yes, z.as_mut());
        let (mut jmax, mut zmax) = (0, 0.0);
        for i in 0..n {
            let a = z[(i, 0)].norm();
            if a > zmax {
                zmax = a;
                jmax = i;
            }
        }
        let ztx: f64 = (0..n).map(|i| (z[(i, 0)].conj() * x[(i, 0)]).re).sum();
        if zmax <= ztx || jmax == last_index {
            break;
        }
        last_index = jmax;
        x = Mat::zeros(n, 1);
        x[(jmax, 0)] = cx(1.0, 0.0);
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize, cols: usize) -> Mat<c64> {
        Mat::from_fn(rows, cols, |i, j| {
            cx(((3 * i + 7 * j) % 11) as f64 - 5.0, ((5 * i + 2 * j) % 7) as f64 - 3.0)
        })
    }

    #[test]
    fn svd_reconstructs_and_is_sign_normalized() {
        let m = sample(4, 6);
        let svd = thin_svd(m.as_ref()).unwrap();
        assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
        let rebuilt = &svd.u * Mat::from_fn(4, 4, |i, j| if i == j { cx(svd.s[i], 0.0) } else { cx(0.0, 0.0) }) * svd.v.adjoint();
        assert!(fro((&rebuilt - &m).as_ref()) <= 1e-12 * fro(m.as_ref()));
        for j in 0..4 {
            let first = (0..4).map(|i| svd.u[(i, j)]).find(|z| z.norm() > 1e-8).unwrap();
            assert!(first.im.abs() < 1e-12 && first.re > 0.0);
        }
    }

    #[test]
    fn condition_estimate_tracks_exact_value() {
        let mut m = Mat::<c64>::identity(3, 3);
        m[(2, 2)] = cx(1e-6, 0.0);
        let f = FactoredPencil::new(m.as_ref());
        assert!((f.condition - 1e6).abs() < 1.0);
        let singular = Mat::<c64>::zeros(3, 3);
        assert!(FactoredPencil::new(singular.as_ref()).condition > 1e14);
    }

    #[test]
    fn transpose_solve_is_plain_transpose() {
        let m = sample(3, 3) + Mat::<c64>::identity(3, 3).as_ref() * faer::Scale(cx(20.0, 1.0));
        let f = FactoredPencil::new(m.as_ref());
        let rhs = sample(3, 1);
        let x = f.solve_transpose(rhs.as_ref());
        let back = m.transpose() * &x;
        assert!(fro((&back - &rhs).as_ref()) < 1e-12);
    }

    #[test]
    fn eigen_descending() {
        let m = sample(5, 3);
        let g = &m * m.adjoint();
        let (vals, vecs) = hermitian_eigen_desc(g.as_ref()).unwrap();
        assert!(vals.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        let s = singular_values(m.as_ref()).unwrap();
        for (k, sv) in s.iter().enumerate() {
            assert!((vals[k].sqrt() - sv).abs() < 1e-10);
        }
        assert_eq!(vecs.ncols(), 5);
    }
}
