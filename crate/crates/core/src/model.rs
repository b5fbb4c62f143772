//! Structured models `H(s) = C (Σ αᵢ(s) Aᵢ)⁻¹ B` and their coefficient functions.

use faer::Mat;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{c64, cx, fro, FactoredPencil};

/// Default cap on the pencil condition number before evaluation is refused.
pub const DEFAULT_CONDITION_CAP: f64 = 1e14;

/// Base shape of a coefficient function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaKind {
    /// `s^power`
    Monomial { power: u32 },
    /// `exp(-tau * s)`
    ExpDelay { tau: f64 },
    /// `p[index]`
    ParamCoordinate { index: usize },
    Constant,
}

/// A scalar coefficient function `αᵢ` with a multiplicative scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaFunction {
    #[serde(flatten)]
    pub kind: AlphaKind,
    #[serde(default = "unit_scale")]
    pub scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

impl AlphaFunction {
    pub fn monomial(power: u32) -> Self {
        AlphaFunction { kind: AlphaKind::Monomial { power }, scale: 1.0 }
    }

    pub fn exp_delay(tau: f64) -> Result<Self> {
        let f = AlphaFunction { kind: AlphaKind::ExpDelay { tau }, scale: 1.0 };
        f.validate()?;
        Ok(f)
    }

    pub fn param(index: usize) -> Self {
        AlphaFunction { kind: AlphaKind::ParamCoordinate { index }, scale: 1.0 }
    }

    pub fn constant() -> Self {
        AlphaFunction { kind: AlphaKind::Constant, scale: 1.0 }
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        let f = AlphaFunction { scale, ..self };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale == 0.0 || !self.scale.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha scale must be finite and nonzero, got {}", self.scale)));
        }
        if let AlphaKind::ExpDelay { tau } = self.kind {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::InvalidArgument(format!("delay must be positive, got {tau}")));
            }
        }
        Ok(())
    }

    /// True when `α(conj s) = conj(α(s))`, which holds for every supported kind.
    pub fn is_real_on_conjugates(&self) -> bool {
        true
    }
}

impl fmt::Display for AlphaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            AlphaKind::Monomial { power: 0 } => "1".to_string(),
            AlphaKind::Monomial { power: 1 } => "s".to_string(),
            AlphaKind::Monomial { power } => format!("s^{power}"),
            AlphaKind::ExpDelay { tau } => format!("exp(-{tau}s)"),
            AlphaKind::ParamCoordinate { index } => format!("p{index}"),
            AlphaKind::Constant => "1".to_string(),
        };
        if self.scale == 1.0 {
            write!(f, "{base}")
        } else {
            write!(f, "{}*{base}", self.scale)
        }
    }
}

impl std::str::FromStr for AlphaFunction {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form: `[scale*]base` with base
    /// `1`, `s`, `s^k`, `exp(-τs)` or `pk`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse coefficient function '{text}'"));
        let t = text.trim();
        let (scale, base) = match t.split_once('*').and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim()))) {
            Some(pair) => pair,
            None => (1.0, t),
        };
        let kind = if base == "1" {
            AlphaKind::Constant
        } else if base == "s" {
            AlphaKind::Monomial { power: 1 }
        } else if let Some(k) = base.strip_prefix("s^") {
            AlphaKind::Monomial { power: k.parse().map_err(|_| bad())? }
        } else if let Some(i) = base.strip_prefix('p') {
            AlphaKind::ParamCoordinate { index: i.parse().map_err(|_| bad())? }
        } else if let Some(inner) = base.strip_prefix("exp(-").and_then(|r| r.strip_suffix("s)")) {
            let tau = inner.trim_end_matches('*').trim();
            AlphaKind::ExpDelay { tau: tau.parse().map_err(|_| bad())? }
        } else {
            return Err(bad());
        };
        let f = AlphaFunction { kind, scale };
        f.validate()?;
        Ok(f)
    }
}

/// Parses a structure: a preset (`delay`, `delay:τ`, `second-order`,
/// `thermal`) or a comma-separated list of coefficient functions.
pub fn parse_structure(text: &str) -> Result<Vec<AlphaFunction>> {
    let t = text.trim();
    match t {
        "delay" => return delay_alphas(1.0),
        "second-order" => return second_order_alphas(DEFAULT_GAMMA_M, DEFAULT_GAMMA_D),
        "thermal" => return Ok(thermal_alphas(4)),
        _ => {}
    }
    if let Some(tau) = t.strip_prefix("delay:") {
        let tau = tau.parse().map_err(|_| Error::InvalidArgument(format!("bad delay '{tau}'")))?;
        return delay_alphas(tau);
    }
    let alphas = t.split(',').map(str::parse).collect::<Result<Vec<AlphaFunction>>>()?;
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("empty structure".into()));
    }
    Ok(alphas)
}

/// Affine parametric coefficients `(1, p₀, …, p_{d−1})`.
pub fn thermal_alphas(dim: usize) -> Vec<AlphaFunction> {
    std::iter::once(AlphaFunction::constant()).chain((0..dim).map(AlphaFunction::param)).collect()
}

/// The delay-system coefficients `(s, 1, e^{-τs})`.
pub fn delay_alphas(tau: f64) -> Result<Vec<AlphaFunction>> {
    Ok(vec![AlphaFunction::monomial(1), AlphaFunction::constant(), AlphaFunction::exp_delay(tau)?])
}

/// Second-order coefficients `(γ_M s², γ_D s, 1)`.
pub fn second_order_alphas(gamma_m: f64, gamma_d: f64) -> Result<Vec<AlphaFunction>> {
    Ok(vec![
        AlphaFunction::monomial(2).with_scale(gamma_m)?,
        AlphaFunction::monomial(1).with_scale(gamma_d)?,
        AlphaFunction::constant(),
    ])
}

pub const DEFAULT_GAMMA_M: f64 = 1e-3;
pub const DEFAULT_GAMMA_D: f64 = 0.031_622_776_601_683_79; // 10^-1.5

/// Where a response map is evaluated: a complex frequency or a real parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EvalPoint {
    Frequency(c64),
    Parameter(Vec<f64>),
}

impl EvalPoint {
    pub fn s(re: f64, im: f64) -> Self {
        EvalPoint::Frequency(cx(re, im))
    }

    pub fn imag(omega: f64) -> Self {
        EvalPoint::Frequency(cx(0.0, omega))
    }

    pub fn frequency(&self) -> Option<c64> {
        match self {
            EvalPoint::Frequency(s) => Some(*s),
            EvalPoint::Parameter(_) => None,
        }
    }

    /// Complex conjugate point (parameters are real and map to themselves).
    pub fn conj(&self) -> Self {
        match self {
            EvalPoint::Frequency(s) => EvalPoint::Frequency(s.conj()),
            p => p.clone(),
        }
    }

    /// Modulus of the frequency or Euclidean norm of the parameter.
    pub fn magnitude(&self) -> f64 {
        match self {
            EvalPoint::Frequency(s) => s.norm(),
            EvalPoint::Parameter(p) => p.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    pub fn distance(&self, other: &EvalPoint) -> f64 {
        match (self, other) {
            (EvalPoint::Frequency(a), EvalPoint::Frequency(b)) => (a - b).norm(),
            (EvalPoint::Parameter(a), EvalPoint::Parameter(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            _ => f64::INFINITY,
        }
    }
}

impl fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalPoint::Frequency(s) => write!(f, "s={}{:+}i", s.re, s.im),
            EvalPoint::Parameter(p) => write!(f, "p={p:?}"),
        }
    }
}

/// Evaluates `α(x)`.
pub fn eval_alpha(f: &AlphaFunction, x: &EvalPoint) -> Result<c64> {
    let base = match (&f.kind, x) {
        (AlphaKind::Constant, _) => cx(1.0, 0.0),
        (AlphaKind::Monomial { power }, EvalPoint::Frequency(s)) => s.powu(*power),
        (AlphaKind::ExpDelay { tau }, EvalPoint::Frequency(s)) => (-*tau * s).exp(),
        (AlphaKind::ParamCoordinate { index }, EvalPoint::Parameter(p)) => match p.get(*index) {
            Some(v) => cx(*v, 0.0),
            None => {
                return Err(Error::IncompatiblePoint(format!(
                    "coordinate {index} requested from a {}-dimensional parameter",
                    p.len()
                )))
            }
        },
        (kind, point) => {
            return Err(Error::IncompatiblePoint(format!("{kind:?} cannot be evaluated at {point}")));
        }
    };
    Ok(base * f.scale)
}

/// `H(s) = C (Σ αᵢ(s) Aᵢ)⁻¹ B` with explicit matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredModel {
    pub alphas: Vec<AlphaFunction>,
    pub a: Vec<Mat<c64>>,
    pub b: Mat<c64>,
    pub c: Mat<c64>,
    pub symmetric: bool,
}

impl StructuredModel {
    pub fn new(
        alphas: Vec<AlphaFunction>,
        a: Vec<Mat<c64>>,
        b: Mat<c64>,
        c: Mat<c64>,
        symmetric: bool,
    ) -> Result<Self> {
        let model = StructuredModel { alphas, a, b, c, symmetric };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.alphas.len() != self.a.len() {
            return Err(Error::Dimension(format!(
                "{} coefficient functions for {} matrices",
                self.alphas.len(),
                self.a.len()
            )));
        }
        for f in &self.alphas {
            f.validate()?;
        }
        let r = self.a[0].nrows();
        for (i, m) in self.a.iter().enumerate() {
            if m.nrows() != r || m.ncols() != r {
                return Err(Error::Dimension(format!("A{i} is {}x{}, expected {r}x{r}", m.nrows(), m.ncols())));
            }
        }
        if self.b.nrows() != r {
            return Err(Error::Dimension(format!("B has {} rows, expected {r}", self.b.nrows())));
        }
        if self.c.ncols() != r {
            return Err(Error::Dimension(format!("C has {} columns, expected {r}", self.c.ncols())));
        }
        if self.symmetric {
            for (i, m) in self.a.iter().enumerate() {
                let skew = fro((m - m.transpose()).as_ref());
                if skew > 1e-12 * fro(m.as_ref()) {
                    return Err(Error::InvalidArgument(format!("A{i} is not symmetric (‖A - Aᵀ‖ = {skew:e})")));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.b.nrows()
    }

    pub fn q(&self) -> usize {
        self.a.len()
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    /// `Σ αᵢ(x) Aᵢ`
    pub fn pencil(&self, x: &EvalPoint) -> Result<Mat<c64>> {
        let r = self.order();
        let mut k = Mat::<c64>::zeros(r, r);
        for (f, m) in self.alphas.iter().zip(&self.a) {
            let w = eval_alpha(f, x)?;
            k += m * faer::Scale(w);
        }
        Ok(k)
    }

    pub fn is_real(&self) -> bool {
        use crate::linalg::is_exactly_real;
        self.a.iter().all(|m| is_exactly_real(m.as_ref()))
            && is_exactly_real(self.b.as_ref())
            && is_exactly_real(self.c.as_ref())
    }
}

/// Evaluates the transfer map with the default condition cap.
pub fn eval_transfer(model: &StructuredModel, x: &EvalPoint) -> Result<Mat<c64>> {
    eval_transfer_capped(model, x, DEFAULT_CONDITION_CAP)
}

/// Evaluates `C (Σ αᵢ(x) Aᵢ)⁻¹ B` by an LU solve, refusing pencils whose
/// estimated 1-norm condition number exceeds `cap`.
pub fn eval_transfer_capped(model: &StructuredModel, x: &EvalPoint, cap: f64) -> Result<Mat<c64>> {
    let k = model.pencil(x)?;
    let lu = FactoredPencil::new(k.as_ref());
    if !(lu.condition <= cap) {
        return Err(Error::SingularPencil { point: x.to_string(), condition: lu.condition });
    }
    let sol = lu.solve(model.b.as_ref());
    let h = &model.c * &sol;
    if (0..h.nrows()).any(|i| (0..h.ncols()).any(|j| !h[(i, j)].is_finite())) {
        return Err(Error::SingularPencil { point: x.to_string(), condition: f64::INFINITY });
    }
    Ok(h)
}

/// The transposed system `(Aᵢᵀ, Cᵀ, Bᵀ)`, whose transfer map is `H(x)ᵀ`.
pub fn transpose_map(model: &StructuredModel) -> StructuredModel {
    StructuredModel {
        alphas: model.alphas.clone(),
        a: model.a.iter().map(|m| m.transpose().to_owned()).collect(),
        b: model.c.transpose().to_owned(),
        c: model.b.transpose().to_owned(),
        symmetric: model.symmetric,
    }
}

/// Replaces `(αᵢ, Aᵢ)` by `(c·αᵢ, Aᵢ/c)`; the transfer map is unchanged.
pub fn rescale_alpha(model: &StructuredModel, index: usize, c: f64) -> Result<StructuredModel> {
    if index >= model.q() {
        return Err(Error::InvalidArgument(format!("no coefficient function {index}")));
    }
    let mut out = model.clone();
    out.alphas[index] = out.alphas[index].with_scale(out.alphas[index].scale * c)?;
    out.a[index] = &out.a[index] * faer::Scale(cx(1.0 / c, 0.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::linalg::solvers::DenseSolveCore;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar(v: f64) -> Mat<c64> {
        Mat::from_fn(1, 1, |_, _| cx(v, 0.0))
    }

    fn scalar_delay() -> StructuredModel {
        StructuredModel::new(
            delay_alphas(1.0).unwrap(),
            vec![scalar(1.0), scalar(1.0), scalar(-0.25)],
            scalar(1.0),
            scalar(1.0),
            false,
        )
        .unwrap()
    }

    fn random_model(rng: &mut ChaCha8Rng, r: usize, m: usize, l: usize) -> StructuredModel {
        let mut rand_mat = |rows: usize, cols: usize| {
            Mat::from_fn(rows, cols, |_, _| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        };
        let mut a0 = rand_mat(r, r);
        for i in 0..r {
            a0[(i, i)] += cx(4.0, 0.0);
        }
        StructuredModel::new(
            vec![AlphaFunction::monomial(1), AlphaFunction::constant()],
            vec![Mat::identity(r, r), a0],
            rand_mat(r, m),
            rand_mat(l, r),
            false,
        )
        .unwrap()
    }

    #[test]
    fn alpha_examples() {
        let z = eval_alpha(&AlphaFunction::monomial(2), &EvalPoint::s(0.0, 2.0)).unwrap();
        assert_eq!(z, cx(-4.0, 0.0));
        let z = eval_alpha(&AlphaFunction::exp_delay(1.0).unwrap(), &EvalPoint::s(0.0, 0.0)).unwrap();
        assert_eq!(z, cx(1.0, 0.0));
        let z = eval_alpha(&AlphaFunction::param(2), &EvalPoint::Parameter(vec![0.1, 5.0, 7.0, 3.0])).unwrap();
        assert_eq!(z, cx(7.0, 0.0));
        let scaled = AlphaFunction::monomial(1).with_scale(3.0).unwrap();
        assert_eq!(eval_alpha(&scaled, &EvalPoint::s(2.0, 0.0)).unwrap(), cx(6.0, 0.0));
    }

    #[test]
    fn alpha_rejects_mismatched_points() {
        let err = eval_alpha(&AlphaFunction::param(0), &EvalPoint::s(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::IncompatiblePoint(_)));
        let err = eval_alpha(&AlphaFunction::monomial(1), &EvalPoint::Parameter(vec![1.0])).unwrap_err();
        assert!(matches!(err, Error::IncompatiblePoint(_)));
        let err = eval_alpha(&AlphaFunction::param(3), &EvalPoint::Parameter(vec![1.0])).unwrap_err();
        assert!(matches!(err, Error::IncompatiblePoint(_)));
        assert!(AlphaFunction::exp_delay(0.0).is_err());
        assert!(AlphaFunction::constant().with_scale(0.0).is_err());
    }

    #[test]
    fn scalar_delay_at_zero() {
        let h = eval_transfer(&scalar_delay(), &EvalPoint::s(0.0, 0.0)).unwrap();
        assert!((h[(0, 0)] - cx(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scalar_closed_form_matches() {
        let model = scalar_delay();
        for k in 0..20 {
            let s = cx(0.1 * k as f64, 0.7 * k as f64 - 3.0);
            let h = eval_transfer(&model, &EvalPoint::Frequency(s)).unwrap()[(0, 0)];
            let exact = 1.0 / (s + 1.0 - 0.25 * (-s).exp());
            assert!((h - exact).norm() <= 4.0 * f64::EPSILON * exact.norm());
        }
    }

    #[test]
    fn identity_model_is_one() {
        let mut e1 = Mat::<c64>::zeros(3, 1);
        e1[(0, 0)] = cx(1.0, 0.0);
        let model = StructuredModel::new(
            vec![AlphaFunction::constant()],
            vec![Mat::identity(3, 3)],
            e1.clone(),
            e1.transpose().to_owned(),
            true,
        )
        .unwrap();
        for s in [cx(0.0, 1.0), cx(5.0, -2.0)] {
            let h = eval_transfer(&model, &EvalPoint::Frequency(s)).unwrap();
            assert_eq!(h[(0, 0)], cx(1.0, 0.0));
        }
    }

    #[test]
    fn singular_pencil_is_reported() {
        let model = StructuredModel::new(
            vec![AlphaFunction::monomial(1)],
            vec![Mat::identity(2, 2)],
            Mat::from_fn(2, 1, |_, _| cx(1.0, 0.0)),
            Mat::from_fn(1, 2, |_, _| cx(1.0, 0.0)),
            true,
        )
        .unwrap();
        let err = eval_transfer(&model, &EvalPoint::s(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::SingularPencil { .. }));
        assert!(err.to_string().contains("s=0"));
    }

    #[test]
    fn dimension_checks() {
        let bad = StructuredModel::new(
            vec![AlphaFunction::constant()],
            vec![Mat::identity(2, 2)],
            Mat::zeros(3, 1),
            Mat::zeros(1, 2),
            false,
        );
        assert!(matches!(bad, Err(Error::Dimension(_))));
        let asym = StructuredModel::new(
            vec![AlphaFunction::constant()],
            vec![Mat::from_fn(2, 2, |i, j| cx((i + 2 * j) as f64, 0.0))],
            Mat::zeros(2, 1),
            Mat::zeros(1, 2),
            true,
        );
        assert!(asym.is_err());
    }

    #[test]
    fn transpose_map_transposes_response() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let model = random_model(&mut rng, 5, 2, 3);
        let t = transpose_map(&model);
        for _ in 0..5 {
            let x = EvalPoint::s(rng.random_range(-1.0..1.0), rng.random_range(-10.0..10.0));
            let h = eval_transfer(&model, &x).unwrap();
            let ht = eval_transfer(&t, &x).unwrap();
            assert!(fro((ht - h.transpose()).as_ref()) <= 1e-12 * fro(h.as_ref()));
        }
        assert_eq!(transpose_map(&t), model);
    }

    #[test]
    fn symmetric_siso_transpose_is_identity_on_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = Mat::from_fn(4, 4, |_, _| cx(rng.random_range(-1.0..1.0), 0.0));
        let a1 = &k + k.transpose() + Mat::<c64>::identity(4, 4).as_ref() * faer::Scale(cx(6.0, 0.0));
        let b = Mat::from_fn(4, 1, |_, _| cx(rng.random_range(-1.0..1.0), 0.0));
        let model = StructuredModel::new(
            vec![AlphaFunction::monomial(1), AlphaFunction::constant()],
            vec![Mat::identity(4, 4), a1],
            b.clone(),
            b.transpose().to_owned(),
            true,
        )
        .unwrap();
        let t = transpose_map(&model);
        for _ in 0..5 {
            let x = EvalPoint::imag(rng.random_range(0.1..100.0));
            let d = eval_transfer(&model, &x).unwrap()[(0, 0)] - eval_transfer(&t, &x).unwrap()[(0, 0)];
            assert!(d.norm() < 1e-14);
        }
    }

    #[test]
    fn scaling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let model = random_model(&mut rng, 6, 1, 1);
        for &c in &[1e-3, 0.5, -2.0, 31.6] {
            let scaled = rescale_alpha(&rescale_alpha(&model, 0, c).unwrap(), 1, 1.0 / c).unwrap();
            for _ in 0..4 {
                let x = EvalPoint::imag(rng.random_range(0.1..50.0));
                let h = eval_transfer(&model, &x).unwrap();
                let hs = eval_transfer(&scaled, &x).unwrap();
                assert!(fro((hs - &h).as_ref()) <= 1e-12 * fro(h.as_ref()));
            }
        }
    }

    #[test]
    fn solve_matches_explicit_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..20 {
            let r = 1 + trial % 10;
            let model = random_model(&mut rng, r, 2, 2);
            let x = EvalPoint::s(rng.random_range(-1.0..1.0), rng.random_range(-5.0..5.0));
            let h = eval_transfer(&model, &x).unwrap();
            let inv = model.pencil(&x).unwrap().partial_piv_lu().inverse();
            let explicit = &model.c * inv * &model.b;
            assert!(fro((&h - explicit).as_ref()) <= 1e-10 * fro(h.as_ref()));
        }
    }

    #[test]
    fn alpha_serde_shape() {
        let json = serde_json::to_string(&AlphaFunction::exp_delay(2.0).unwrap()).unwrap();
        assert_eq!(json, r#"{"kind":"exp_delay","tau":2.0,"scale":1.0}"#);
        let back: AlphaFunction = serde_json::from_str(r#"{"kind":"monomial","power":2}"#).unwrap();
        assert_eq!(back, AlphaFunction::monomial(2));
    }

    #[test]
    fn alpha_text_round_trip() {
        let fs = [
            AlphaFunction::monomial(1),
            AlphaFunction::monomial(3).with_scale(0.001).unwrap(),
            AlphaFunction::constant(),
            AlphaFunction::param(2),
            AlphaFunction::exp_delay(0.5).unwrap().with_scale(-2.0).unwrap(),
        ];
        for f in fs {
            assert_eq!(f.to_string().parse::<AlphaFunction>().unwrap(), f);
        }
        assert_eq!("exp(-2*s)".parse::<AlphaFunction>().unwrap(), AlphaFunction::exp_delay(2.0).unwrap());
        for bad in ["", "x", "s^a", "exp(-0s)", "0*s", "p-1"] {
            assert!(bad.parse::<AlphaFunction>().is_err(), "{bad}");
        }
    }

    #[test]
    fn structure_presets() {
        assert_eq!(parse_structure("delay").unwrap(), delay_alphas(1.0).unwrap());
        assert_eq!(parse_structure("delay:2").unwrap(), delay_alphas(2.0).unwrap());
        assert_eq!(parse_structure("thermal").unwrap().len(), 5);
        assert_eq!(parse_structure("s, 1, exp(-1s)").unwrap(), delay_alphas(1.0).unwrap());
        assert_eq!(parse_structure("second-order").unwrap()[0].scale, DEFAULT_GAMMA_M);
        assert!(parse_structure("s,,1").is_err());
    }
}
