use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which variant of the relaxed problem to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    /// Residual terms only, no rank surrogate.
    Benchmark,
    /// Classical nuclear norm (all weights one), single stage.
    EqWeights,
    /// Iteratively reweighted nuclear norm.
    Reweighted,
}

impl std::str::FromStr for SolverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "benchmark" => Ok(SolverMode::Benchmark),
            "eq_weights" | "eq-weights" => Ok(SolverMode::EqWeights),
            "reweighted" => Ok(SolverMode::Reweighted),
            other => Err(Error::InvalidArgument(format!("unknown solver mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for SolverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverMode::Benchmark => "benchmark",
            SolverMode::EqWeights => "eq_weights",
            SolverMode::Reweighted => "reweighted",
        })
    }
}

/// How the weighted nuclear norm gradient is computed inside the optimizer.
///
/// `Svd` takes thin SVDs of both stacks. `Gram` eigendecomposes the `N×N`
/// Gram matrices instead, which is several times cheaper for wide stacks but
/// ignores singular values below `1e-7·γ₁` (those contribute a zero
/// subgradient element). `Auto` picks `Svd` for `N ≤ 16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralRoute {
    #[default]
    Auto,
    Svd,
    Gram,
}

impl SpectralRoute {
    pub(crate) fn use_gram(self, n: usize) -> bool {
        match self {
            SpectralRoute::Auto => n > 16,
            SpectralRoute::Svd => false,
            SpectralRoute::Gram => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub mode: SolverMode,
    pub lambda0: f64,
    pub lr0: f64,
    pub inner_iters: usize,
    pub lr_drop_every: usize,
    pub lr_drop_factor: f64,
    pub outer_iters: usize,
    pub epsilon: f64,
    pub max_val: f64,
    pub seed: u64,
    pub init_scale: f64,
    /// Explicit `λ⁽⁰⁾ … λ⁽ⁱᵗᵉʳˢ⁾`; overrides the `λ⁽⁰⁾/i` schedule when set.
    pub lambda_schedule: Option<Vec<f64>>,
    pub spectral: SpectralRoute,
    pub trace_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::reweighted()
    }
}

impl SolverConfig {
    pub fn reweighted() -> Self {
        SolverConfig {
            mode: SolverMode::Reweighted,
            lambda0: 5e-3,
            lr0: 5e-3,
            inner_iters: 50_000,
            lr_drop_every: 12_500,
            lr_drop_factor: 5.0,
            outer_iters: 4,
            epsilon: 1e-12,
            max_val: 1e4,
            seed: 0,
            init_scale: 1e-2,
            lambda_schedule: None,
            spectral: SpectralRoute::Auto,
            trace_every: 100,
        }
    }

    pub fn benchmark() -> Self {
        SolverConfig { mode: SolverMode::Benchmark, lambda0: 0.0, outer_iters: 0, ..SolverConfig::reweighted() }
    }

    pub fn eq_weights() -> Self {
        SolverConfig { mode: SolverMode::EqWeights, outer_iters: 0, ..SolverConfig::reweighted() }
    }

    pub fn for_mode(mode: SolverMode) -> Self {
        match mode {
            SolverMode::Benchmark => SolverConfig::benchmark(),
            SolverMode::EqWeights => SolverConfig::eq_weights(),
            SolverMode::Reweighted => SolverConfig::reweighted(),
        }
    }

    /// Sets `inner_iters` and keeps the learning-rate drop at a quarter of it,
    /// so a shortened run still sees the same four-phase schedule.
    pub fn with_inner_iters(mut self, inner_iters: usize) -> Self {
        self.inner_iters = inner_iters;
        self.lr_drop_every = (inner_iters / 4).max(1);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Applies the mode constraints: benchmark forces `λ⁽⁰⁾ = 0` and no outer
    /// iterations, equal weights forces no outer iterations.
    pub fn normalized(mut self) -> Self {
        match self.mode {
            SolverMode::Benchmark => {
                self.lambda0 = 0.0;
                self.outer_iters = 0;
                self.lambda_schedule = None;
            }
            SolverMode::EqWeights => self.outer_iters = 0,
            SolverMode::Reweighted => {}
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.lambda0 >= 0.0 && self.lambda0.is_finite()) {
            return bad(format!("lambda0 must be finite and nonnegative, got {}", self.lambda0));
        }
        if !(self.lr0 > 0.0 && self.lr0.is_finite()) {
            return bad(format!("lr0 must be positive, got {}", self.lr0));
        }
        if self.lr_drop_every == 0 {
            return bad("lr_drop_every must be positive".into());
        }
        if !(self.lr_drop_factor > 0.0 && self.lr_drop_factor.is_finite()) {
            return bad(format!("lr_drop_factor must be positive, got {}", self.lr_drop_factor));
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.max_val > 0.0) {
            return bad(format!("max_val must be positive, got {}", self.max_val));
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return bad(format!("init_scale must be nonnegative, got {}", self.init_scale));
        }
        if self.trace_every == 0 {
            return bad("trace_every must be positive".into());
        }
        if let Some(list) = &self.lambda_schedule {
            if list.len() != self.outer_iters + 1 {
                return bad(format!(
                    "lambda_schedule needs {} entries (outer_iters + 1), got {}",
                    self.outer_iters + 1,
                    list.len()
                ));
            }
            if list.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
                return bad("lambda_schedule entries must be finite and nonnegative".into());
            }
        }
        Ok(())
    }

    /// Regularization parameter of stage `i` (0 is the initial solve).
    pub fn lambda_at(&self, i: usize) -> f64 {
        match &self.lambda_schedule {
            Some(list) => list[i],
            None if i == 0 => self.lambda0,
            None => self.lambda0 / i as f64,
        }
    }

    /// Initial learning rate of stage `i`, halved once per outer iteration.
    pub fn lr_at(&self, i: usize) -> f64 {
        self.lr0 / 2f64.powi(i as i32)
    }
}
