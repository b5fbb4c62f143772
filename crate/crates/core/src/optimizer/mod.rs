//! Relaxed rank minimization: weighted nuclear norm, the penalized objective
//! and its gradient, an NAdam inner solver and the reweighting driver.

mod config;
mod nadam;
mod objective;
mod solve;
mod wnn;

pub use config::{SolverConfig, SolverMode, SpectralRoute};
pub use objective::{objective, objective_gradient, objective_gradient_with_norm, objective_with_norm, ResidualNorm};
pub use solve::{optimize, solve_rsmi, SolveState, TraceRow};
pub use wnn::{update_weights, weighted_nuclear_norm, wnn_gradient};
