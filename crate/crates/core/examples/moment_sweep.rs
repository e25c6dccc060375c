//! Sweep the moment over λ, closed form and Monte Carlo, and plot it.

use weldbench::harness::{moment_plot, run_sweep, sweep_csv, RunConfig, SweepPoint, Table};

fn main() -> weldbench::Result<()> {
    let mut cfg = RunConfig {
        seed: Some(3),
        samples: Some(5000),
        ..Default::default()
    };
    cfg.sweep.points = (0..9)
        .map(|i| SweepPoint {
            kappa: 3.0,
            rho_minus: 1.0,
            rho_plus: 2.0,
            lambda: -2.0 + 0.5 * i as f64,
        })
        .collect();
    let csv = sweep_csv(&run_sweep(&cfg)?);
    print!("{csv}");
    let path = std::env::temp_dir().join("weldbench-moments.svg");
    std::fs::write(&path, moment_plot(&Table::from_csv(&csv)?).to_svg())?;
    println!("figure: {}", path.display());
    Ok(())
}
