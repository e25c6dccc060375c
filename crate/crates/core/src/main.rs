//! `weldbench` command line: validation suites, single evaluations, Monte
//! Carlo runs, sweeps and plots.
//!
//! Exit status: 0 success, 1 a validation check failed, 2 bad input
//! (nothing is written in that case).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weldbench::exact::{
    disk_length_joint_density, h, h_bar, reflection, reflection_bar, sle_derivative_moment,
    BoundaryCosmology, SleParams,
};
use weldbench::fieldsim::{
    equivalence_functionals, equivalence_test, mc_interval_moment, mc_reflection_moment,
    IntervalGrid, FUNCTIONAL_NAMES,
};
use weldbench::harness::{
    ks_overlay, moment_plot, run_suite, run_sweep, sweep_csv, tail_plot, write_report, Plot,
    RunConfig, Suite, Table, GROUPS,
};
use weldbench::loewner::sample_psi_prime;
use weldbench::{Error, Result};

#[derive(Parser)]
#[command(
    name = "weldbench",
    version,
    about = "Exact SLE / boundary Liouville formulas with Monte Carlo cross-checks"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration (defaults < file < flags).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default ./weldbench-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override every Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    tolerance_scale: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a validation suite: specfun, exact, loewner, fieldsim or all.
    Validate { suite: String },
    /// Evaluate a closed form.
    #[command(subcommand)]
    Exact(ExactCmd),
    /// Run one Monte Carlo estimator.
    #[command(subcommand)]
    Mc(McCmd),
    /// Sweep the moment over the configured points; writes sweep.csv and moments.svg.
    Sweep,
    /// Draw a figure from a CSV table.
    Plot {
        /// moment (sweep table) or tail (tail-law table).
        kind: String,
        input: PathBuf,
        /// SVG file to write (default: input with .svg extension).
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExactCmd {
    /// E[ψ'(1)^λ].
    Moment {
        #[arg(long)]
        kappa: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho_minus: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho_plus: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Boundary reflection coefficient R̄ (or the unit-normalised R with --unit).
    Reflection {
        #[arg(long)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        mu1: f64,
        #[arg(long, default_value_t = 0.0)]
        mu2: f64,
        #[arg(long)]
        unit: bool,
    },
    /// Three-point constant H̄^{(β,β,α)} (or H with --unit).
    Hbar {
        #[arg(long)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        unit: bool,
    },
    /// Joint density of the left/right boundary lengths of a weight-W disk.
    Density {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        weight: f64,
        #[arg(long)]
        left: f64,
        #[arg(long)]
        right: f64,
    },
}

#[derive(Subcommand)]
enum McCmd {
    /// Monte Carlo moments of ψ'(1).
    Sle {
        #[arg(long)]
        kappa: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho_minus: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho_plus: f64,
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            default_value = "-1,-0.5"
        )]
        lambda: Vec<f64>,
    },
    /// Chaos moment: reflection (--mu1/--mu2) or, with --alpha, the interval moment.
    Gmc {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        mu1: f64,
        #[arg(long, default_value_t = 0.0)]
        mu2: f64,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Two constructions of the drifted process; KS p-values and a CDF overlay.
    Bm {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        m: f64,
    },
}

/// Defaults < config file < flags, then validated.
fn resolve(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if c.seed.is_some() {
        cfg.seed = c.seed;
    }
    if c.out.is_some() {
        cfg.out = c.out.clone();
    }
    if c.samples.is_some() {
        cfg.samples = c.samples;
    }
    if let Some(t) = c.tolerance_scale {
        cfg.tolerance_scale = t;
    }
    cfg.validate()?;
    cfg.resolve_seed();
    Ok(cfg)
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out
        .clone()
        .unwrap_or_else(|| PathBuf::from("weldbench-out"))
}

fn write(path: &Path, text: String) -> Result<()> {
    if let Some(d) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(d)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = resolve(&cli.common)?;
    let seed = cfg.seed.expect("resolved");
    let n = cfg.samples.unwrap_or(10_000);
    match cli.cmd {
        Cmd::Validate { suite } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, &cfg)?;
            let dir = out_dir(&cfg);
            write_report(&report, &cfg, &dir)?;
            for (g, desc) in GROUPS {
                let recs = report.group(g);
                if recs.is_empty() {
                    continue;
                }
                let bad = recs.iter().filter(|r| !r.passed()).count();
                println!(
                    "{} {g}: {desc} ({} checks, {bad} failed)",
                    if bad == 0 { "PASS" } else { "FAIL" },
                    recs.len()
                );
            }
            println!(
                "seed {seed}: {} passed, {} failed; outputs in {}",
                report.passed,
                report.failed,
                dir.display()
            );
            Ok(report.exit_code() as u8)
        }
        Cmd::Exact(e) => {
            let v = match e {
                ExactCmd::Moment {
                    kappa,
                    rho_minus,
                    rho_plus,
                    lambda,
                } => sle_derivative_moment(lambda, &SleParams::new(kappa, rho_minus, rho_plus)?)?,
                ExactCmd::Reflection {
                    gamma,
                    beta,
                    mu1,
                    mu2,
                    unit,
                } => {
                    let c = BoundaryCosmology::new(mu1, mu2, gamma)?;
                    if unit {
                        reflection(beta, &c, gamma)?
                    } else {
                        reflection_bar(beta, &c, gamma)?
                    }
                }
                ExactCmd::Hbar {
                    gamma,
                    beta,
                    alpha,
                    unit,
                } => {
                    if unit {
                        h(beta, alpha, gamma)?
                    } else {
                        h_bar(beta, alpha, gamma)?
                    }
                }
                ExactCmd::Density {
                    gamma,
                    weight,
                    left,
                    right,
                } => disk_length_joint_density(weight, left, right, gamma)?,
            };
            println!("{v:.16e}");
            Ok(0)
        }
        Cmd::Mc(m) => {
            match m {
                McCmd::Sle {
                    kappa,
                    rho_minus,
                    rho_plus,
                    lambda,
                } => {
                    let p = SleParams::new(kappa, rho_minus, rho_plus)?;
                    let s = sample_psi_prime(&p, n, &cfg.sim, seed)?;
                    println!("seed {seed}, {} of {n} paths accepted", s.values.len());
                    for l in lambda {
                        let est = s.moment(l);
                        let exact = sle_derivative_moment(l, &p)?;
                        println!(
                            "λ = {l}: {:.6} ± {:.6} (closed form {exact:.6})",
                            est.mean, est.stderr
                        );
                    }
                }
                McCmd::Gmc {
                    gamma,
                    beta,
                    mu1,
                    mu2,
                    alpha,
                } => {
                    let (est, exact) = match alpha {
                        Some(a) => (
                            mc_interval_moment(
                                beta,
                                a,
                                gamma,
                                n,
                                IntervalGrid {
                                    cells: 1024,
                                    grading: 2.0,
                                },
                                seed,
                            )?,
                            h_bar(beta, a, gamma)?,
                        ),
                        None => {
                            let c = BoundaryCosmology::new(mu1, mu2, gamma)?;
                            (
                                mc_reflection_moment(beta, &c, gamma, n, cfg.gmc.strip, seed)?,
                                reflection_bar(beta, &c, gamma)?,
                            )
                        }
                    };
                    println!(
                        "seed {seed}: fine {:.6}, coarse {:.6}, extrapolated {:.6} ± {:.6} (closed form {exact:.6}){}",
                        est.fine.mean,
                        est.coarse.mean,
                        est.extrapolated.mean,
                        est.extrapolated.stderr,
                        if est.variance_flag { " [high variance]" } else { "" }
                    );
                }
                McCmd::Bm { a, m } => {
                    let r = equivalence_test(a, m, n, seed)?;
                    for (name, p) in FUNCTIONAL_NAMES.iter().zip(r.p_values) {
                        println!("{name}: KS p = {p:.4}");
                    }
                    let (x1, x2) = equivalence_functionals(a, m, n, seed)?;
                    let g = |v: &[weldbench::fieldsim::Functionals]| {
                        v.iter().map(|f| f.max).collect::<Vec<_>>()
                    };
                    let fig = ks_overlay(
                        &format!("global max, a = {a}, M = {m}"),
                        ("recentred", &g(&x1)),
                        ("conditioned", &g(&x2)),
                    );
                    let path = out_dir(&cfg).join("ks-overlay.svg");
                    write(&path, fig.to_svg())?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(0)
        }
        Cmd::Sweep => {
            let rows = run_sweep(&cfg)?;
            let dir = out_dir(&cfg);
            let csv = sweep_csv(&rows);
            write(&dir.join("sweep.csv"), csv.clone())?;
            write(
                &dir.join("moments.svg"),
                moment_plot(&Table::from_csv(&csv)?).to_svg(),
            )?;
            let errors = rows.iter().filter(|r| !r.error.is_empty()).count();
            println!(
                "{} points ({errors} not evaluated) written to {}",
                rows.len(),
                dir.display()
            );
            Ok(0)
        }
        Cmd::Plot {
            kind,
            input,
            output,
        } => {
            let t = Table::read(&input)?;
            let fig: Plot = match kind.as_str() {
                "moment" => moment_plot(&t),
                "tail" => tail_plot(&t),
                k => {
                    return Err(Error::Config(format!(
                        "unknown plot kind '{k}' (moment, tail)"
                    )))
                }
            };
            let path = output.unwrap_or_else(|| input.with_extension("svg"));
            write(&path, fig.to_svg())?;
            println!("wrote {}", path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
