//! The upper tail of ψ'(1) decays like y^{-λ₀}: fit the log-log slope of the
//! empirical survival function and draw it.

use weldbench::exact::SleParams;
use weldbench::harness::{tail_plot, Table};
use weldbench::loewner::{sample_psi_prime, SimConfig};

fn main() -> weldbench::Result<()> {
    let p = SleParams::new(2.0, 0.0, -0.9)?;
    let s = sample_psi_prime(&p, 20_000, &SimConfig::default(), 9)?;
    let fit = s.tail_fit(10.0, 1000.0, 12);
    println!(
        "fitted slope {:.4}, predicted -λ₀ = {:.4}",
        fit.slope,
        -p.lambda0()
    );
    let mut t = Table::new(&["y", "survival", "fit", "reference"]);
    let (y0, s0) = (fit.levels[0], fit.survival[0]);
    for (&y, &sv) in fit.levels.iter().zip(&fit.survival) {
        t.rows.push(vec![
            y,
            sv,
            s0 * (y / y0).powf(fit.slope),
            s0 * (y / y0).powf(-p.lambda0()),
        ]);
    }
    let path = std::env::temp_dir().join("weldbench-tail.svg");
    std::fs::write(&path, tail_plot(&t).to_svg())?;
    println!("figure: {}", path.display());
    Ok(())
}
