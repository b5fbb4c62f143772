//! Generalized Sylvester interpolation constraints.
//!
//! For samples `(σⱼ, H(σⱼ))` and coefficient functions `αᵢ`, any matrices
//! `Aᵢ` with
//!
//! ```text
//! Σ Aᵢ Λᵢ  = rhs_right        Λᵢ = diag(αᵢ(σ₁), …, αᵢ(σ_N))
//! Σ Aᵢᵀ Λᵢ = rhs_left
//! ```
//!
//! define a model `(Aᵢ, b_block, c_block)` that interpolates the data. In the
//! SISO case both right-hand sides equal `H_σ 𝟙ᵀ`. Transposes are plain
//! transposes, never conjugate transposes.

use faer::Mat;

use crate::error::{Error, Result};
use crate::linalg::{c64, cx, fro, is_exactly_real};
use crate::model::{eval_alpha, AlphaFunction, EvalPoint};
use crate::samples::SampleSet;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    /// Diagonals of `Λ₁ … Λ_q`.
    pub lambdas: Vec<Vec<c64>>,
    pub rhs_right: Mat<c64>,
    pub rhs_left: Mat<c64>,
    /// `N×m` block whose row `j` is `cⱼᵀ H(σⱼ)` (`H_σ` for SISO); the input
    /// matrix of the sample-indexed model.
    pub b_block: Mat<c64>,
    /// `l×N` block whose column `k` is `H(σₖ) bₖ` (`H_σᵀ` for SISO); the output
    /// matrix of the sample-indexed model.
    pub c_block: Mat<c64>,
    pub symmetric: bool,
    pub mimo: bool,
    /// Conjugate partner of each sample when the data are closed under
    /// conjugation (directions included). The solution set is then invariant
    /// under `Aᵢ ↦ P conj(Aᵢ) P` with `P` the pairing permutation.
    pub pairing: Option<Vec<usize>>,
}

impl ConstraintSystem {
    pub fn n(&self) -> usize {
        self.rhs_right.nrows()
    }

    pub fn q(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambda_matrix(&self, i: usize) -> Mat<c64> {
        let d = &self.lambdas[i];
        Mat::from_fn(d.len(), d.len(), |r, c| if r == c { d[r] } else { cx(0.0, 0.0) })
    }

    /// True when every diagonal and right-hand side is exactly real.
    pub fn is_real(&self) -> bool {
        self.lambdas.iter().all(|d| d.iter().all(|z| z.im == 0.0))
            && is_exactly_real(self.rhs_right.as_ref())
            && is_exactly_real(self.rhs_left.as_ref())
            && is_exactly_real(self.b_block.as_ref())
            && is_exactly_real(self.c_block.as_ref())
    }

    pub(crate) fn check_variables(&self, a: &[Mat<c64>]) -> Result<()> {
        let n = self.n();
        if a.len() != self.q() {
            return Err(Error::Dimension(format!("expected {} matrices, got {}", self.q(), a.len())));
        }
        for (i, m) in a.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension(format!("A{i} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
            }
        }
        Ok(())
    }
}

/// `Λᵢ` diagonals: entry `j` of diagonal `i` is `αᵢ(σⱼ)`.
pub fn assemble_lambdas(alphas: &[AlphaFunction], points: &[EvalPoint]) -> Result<Vec<Vec<c64>>> {
    alphas
        .iter()
        .map(|f| {
            points
                .iter()
                .enumerate()
                .map(|(j, x)| eval_alpha(f, x).map_err(|e| Error::at_point(j, e)))
                .collect()
        })
        .collect()
}

/// Builds the constraint system for `samples`. Tangential (MIMO) mode is used
/// whenever the samples carry directions; it is required when `l > 1` or `m > 1`.
pub fn assemble_constraints(samples: &SampleSet, alphas: &[AlphaFunction], symmetric: bool) -> Result<ConstraintSystem> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("at least one coefficient function is required".into()));
    }
    samples.validate()?;
    let n = samples.len();
    let lambdas = assemble_lambdas(alphas, &samples.points)?;
    let (b_block, c_block, mimo) = match (&samples.right_dirs, &samples.left_dirs) {
        (Some(right), Some(left)) => {
            let m = samples.inputs();
            let l = samples.outputs();
            let mut b_block = Mat::<c64>::zeros(n, m);
            let mut c_block = Mat::<c64>::zeros(l, n);
            for j in 0..n {
                let h = &samples.responses[j];
                for col in 0..m {
                    b_block[(j, col)] = (0..l).map(|row| left[j][row] * h[(row, col)]).sum();
                }
                for row in 0..l {
                    c_block[(row, j)] = (0..m).map(|col| h[(row, col)] * right[j][col]).sum();
                }
            }
            (b_block, c_block, true)
        }
        _ => {
            if !samples.is_siso() {
                return Err(Error::InvalidArgument(format!(
                    "{}x{} responses need tangential directions",
                    samples.outputs(),
                    samples.inputs()
                )));
            }
            let h = Mat::from_fn(n, 1, |j, _| samples.responses[j][(0, 0)]);
            let ht = h.transpose().to_owned();
            (h, ht, false)
        }
    };
    // rhs_right[j,k] = cⱼᵀ H(σⱼ) bₖ,  rhs_left[j,k] = bⱼᵀ H(σⱼ)ᵀ cₖ
    let (rhs_right, rhs_left) = if mimo {
        let right = samples.right_dirs.as_ref().expect("mimo");
        let left = samples.left_dirs.as_ref().expect("mimo");
        let big_b = Mat::from_fn(samples.inputs(), n, |i, k| right[k][i]);
        let big_c = Mat::from_fn(samples.outputs(), n, |i, k| left[k][i]);
        (&b_block * big_b, c_block.transpose() * big_c)
    } else {
        let ones = Mat::from_fn(1, n, |_, _| cx(1.0, 0.0));
        let r = &b_block * &ones;
        (r.clone(), r)
    };
    let pairing = conjugate_symmetry(samples, alphas)?;
    Ok(ConstraintSystem { lambdas, rhs_right, rhs_left, b_block, c_block, symmetric, mimo, pairing })
}

fn conjugate_symmetry(samples: &SampleSet, alphas: &[AlphaFunction]) -> Result<Option<Vec<usize>>> {
    if !samples.conjugate_closed || !alphas.iter().all(|f| f.is_real_on_conjugates()) {
        return Ok(None);
    }
    let partner = samples.conjugate_pairing()?;
    let paired = |dirs: &Option<Vec<Vec<c64>>>| match dirs {
        None => true,
        Some(d) => (0..d.len()).all(|j| d[j].iter().zip(&d[partner[j]]).all(|(x, y)| *x == y.conj())),
    };
    Ok((paired(&samples.right_dirs) && paired(&samples.left_dirs)).then_some(partner))
}

/// `R₁ = Σ AᵢΛᵢ − rhs_right` and `R₂ = Σ AᵢᵀΛᵢ − rhs_left`. In symmetric mode
/// only `R₁` is formed and returned twice.
pub fn residuals(system: &ConstraintSystem, a: &[Mat<c64>]) -> Result<(Mat<c64>, Mat<c64>)> {
    system.check_variables(a)?;
    let n = system.n();
    let r1 = Mat::from_fn(n, n, |j, k| {
        let mut acc = -system.rhs_right[(j, k)];
        for (ai, lam) in a.iter().zip(&system.lambdas) {
            acc += ai[(j, k)] * lam[k];
        }
        acc
    });
    if system.symmetric {
        return Ok((r1.clone(), r1));
    }
    let r2 = Mat::from_fn(n, n, |j, k| {
        let mut acc = -system.rhs_left[(j, k)];
        for (ai, lam) in a.iter().zip(&system.lambdas) {
            acc += ai[(k, j)] * lam[k];
        }
        acc
    });
    Ok((r1, r2))
}

/// `Aᵢ = Kᵢ + Kᵢᵀ`.
pub fn symmetrize(k: &[Mat<c64>]) -> Result<Vec<Mat<c64>>> {
    k.iter()
        .enumerate()
        .map(|(i, m)| {
            if m.nrows() != m.ncols() {
                return Err(Error::Dimension(format!("K{i} is {}x{}, not square", m.nrows(), m.ncols())));
            }
            Ok(m + m.transpose())
        })
        .collect()
}

/// Residual norms of the two derived single-matrix Sylvester equations that
/// hold for `q = 2`:
///
/// ```text
/// Λ₂A₁Λ₁ − Λ₁A₁Λ₂ = Λ₂·rhs_right − rhs_leftᵀ·Λ₂
/// Λ₂A₂Λ₁ − Λ₁A₂Λ₂ = rhs_leftᵀ·Λ₁ − Λ₁·rhs_right
/// ```
///
/// Both follow from the pair of constraints, so they vanish at any feasible point.
pub fn q2_consistency(system: &ConstraintSystem, a1: &Mat<c64>, a2: &Mat<c64>) -> Result<(f64, f64)> {
    if system.q() != 2 {
        return Err(Error::InvalidArgument(format!("q2_consistency needs q = 2, got q = {}", system.q())));
    }
    system.check_variables(&[a1.clone(), a2.clone()])?;
    let n = system.n();
    let (l1, l2) = (&system.lambdas[0], &system.lambdas[1]);
    let (rr, rl) = (&system.rhs_right, &system.rhs_left);
    let e1 = Mat::from_fn(n, n, |j, k| {
        l2[j] * a1[(j, k)] * l1[k] - l1[j] * a1[(j, k)] * l2[k] - (l2[j] * rr[(j, k)] - rl[(k, j)] * l2[k])
    });
    let e2 = Mat::from_fn(n, n, |j, k| {
        l2[j] * a2[(j, k)] * l1[k] - l1[j] * a2[(j, k)] * l2[k] - (rl[(k, j)] * l1[k] - l1[j] * rr[(j, k)])
    });
    Ok((fro(e1.as_ref()), fro(e2.as_ref())))
}
