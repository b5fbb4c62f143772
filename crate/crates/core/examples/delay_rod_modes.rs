//! Compare the three solver modes on the delay heat rod and print the
//! singular value decay and the order-3 test errors.
//!
//! `cargo run --release --example delay_rod_modes -- 2000` sets the inner
//! iterations (default 2000 keeps the run short).

use rankfit::harness::{experiment_data, run_mode, ErrorMetric, Experiment, ReproduceOptions, MODES};

fn main() -> rankfit::Result<()> {
    let inner = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    let options = ReproduceOptions { inner_iters: Some(inner), metric: ErrorMetric::Relative, ..ReproduceOptions::default() };
    let data = experiment_data(Experiment::DelayRod, &options)?;
    println!("{}: {} training, {} test frequencies, {inner} inner iterations", data.ground_truth.description, data.train.len(), data.test.len());
    for mode in MODES {
        let (report, _) = run_mode(&data, mode, &options)?;
        let s = &report.sv_report.sv_horizontal;
        let decay: Vec<String> = s.iter().take(6).map(|v| format!("{:.1e}", v / s[0])).collect();
        println!(
            "{:<11} γ/γ₁ = [{}]  order-{} median error {:.2e}  ({:.0}s)",
            mode.to_string(),
            decay.join(", "),
            report.order_used,
            report.median_error,
            report.wall_time
        );
    }
    Ok(())
}
