//! `logdiss`: command-line driver for symbols, kernels, simulations,
//! sweeps, the property suite and v-independence experiments.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 verification or acceptance failure.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logdiss::config::SimConfig;
use logdiss::error::Error;
use logdiss::harness::{
    residual_base_grid, run_max_principle, run_v_independence, save_json, sweep, write_kernel_csv,
    write_symbol_csv, KernelSummary, SweepAxis, DEFAULT_SWEEP_CAP,
};
use logdiss::kernels::{certified_kernel, positivity_scan, PositivityReport};
use logdiss::symbols::{decompose, full_symbol, DissipationSpec, Evaluation, Variant};
use logdiss::verify::{verify_suite, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "logdiss",
    version,
    about = "Log-modulated fractional dissipation toolkit"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON simulation config (keys as in SimConfig; unknown keys are rejected).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides every seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the full symbol, main term and residual.
    Symbol {
        #[arg(long, default_value_t = 1e-2)]
        xi_min: f64,
        #[arg(long, default_value_t = 1e3)]
        xi_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Certified residual kernel, or a heat-kernel positivity scan.
    Kernel {
        #[arg(long, value_enum, default_value_t = KernelKind::Residual)]
        which: KernelKind,
        /// Time of the heat kernel for the positivity scan.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Run one maximum-principle experiment.
    Simulate,
    /// Cartesian parameter sweep around the config.
    Sweep {
        /// `name=v1,v2,…` with name in gamma, beta, lambda, nu, amplitude.
        #[arg(long = "axis")]
        axes: Vec<SweepAxis>,
        #[arg(long, default_value_t = DEFAULT_SWEEP_CAP)]
        cap: usize,
    },
    /// Run the fixed property suite.
    Verify {
        /// Scales the real-space normalization constant (mutation check).
        #[arg(long, default_value_t = 1.0, hide = true)]
        constant_scale: f64,
    },
    /// Compare growth constants across velocity amplitudes.
    Independence {
        #[arg(long, value_delimiter = ',', required = true)]
        amplitudes: Vec<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Residual,
    Positivity,
}

enum Failure {
    Config(String),
    Numerical(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure { .. }
            | Error::NonFiniteSymbol { .. }
            | Error::QuadratureNonConvergence { .. }
            | Error::ExtrapolationNonConvergence { .. }
            | Error::GammaPole(_) => Failure::Numerical(e.to_string()),
            Error::Io(_) => Failure::Numerical(format!("i/o: {e}")),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn load_config(common: &Common) -> Result<SimConfig, Failure> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("--config <path> is required for this subcommand".into()))?;
    let mut cfg = SimConfig::load(path)?;
    if let Some(seed) = common.seed {
        cfg.theta_seed = seed;
        cfg.velocity.seed = seed;
    }
    Ok(cfg)
}

fn out_path(common: &Common, name: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(&common.out)
        .map_err(|e| Failure::Config(format!("cannot create {}: {e}", common.out.display())))?;
    Ok(common.out.join(name))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(path).map_err(Error::from)?))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(k) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    let common = &cli.common;
    match cli.command {
        Command::Symbol {
            xi_min,
            xi_max,
            points,
        } => {
            let cfg = load_config(common)?;
            if !(xi_min > 0.0 && xi_max > xi_min && points >= 2) {
                return Err(Failure::Config(
                    "need 0 < xi_min < xi_max and points >= 2".into(),
                ));
            }
            let d = decompose(&cfg.spec, Evaluation::ClosedForm)?;
            let full = full_symbol(&cfg.spec)?;
            let xis: Vec<f64> = (0..points)
                .map(|i| xi_min * (xi_max / xi_min).powf(i as f64 / (points - 1) as f64))
                .collect();
            let path = out_path(common, "symbol.csv")?;
            write_symbol_csv(&xis, &full, &d.main, &d.residual, &mut create(&path)?)?;
            println!(
                "regime {:?}, C_beta = {}, wrote {}",
                d.regime,
                d.c_beta,
                path.display()
            );
        }
        Command::Kernel { which, t } => {
            let cfg = load_config(common)?;
            match which {
                KernelKind::Residual => {
                    let residual = decompose(&cfg.spec, Evaluation::ClosedForm)?.residual;
                    let k = certified_kernel(&residual, &residual_base_grid(cfg.dim)?)?;
                    let csv = out_path(common, "kernel.csv")?;
                    write_kernel_csv(&k, &mut create(&csv)?)?;
                    let summary = KernelSummary::new(residual.label(), &k);
                    save_json(&summary, &out_path(common, "kernel.json")?)?;
                    println!(
                        "residual kernel L1 = {:.6} (converged: {}), wrote {}",
                        summary.l1_estimate,
                        summary.converged,
                        csv.display()
                    );
                }
                KernelKind::Positivity => {
                    let mut specs = Vec::new();
                    for gamma in [0.5, 1.0, 1.5] {
                        for lambda in [1.5, 2.0, 4.0] {
                            specs.push(DissipationSpec::new(
                                Variant::A,
                                gamma,
                                cfg.spec.beta,
                                lambda,
                                cfg.spec.nu,
                            )?);
                        }
                    }
                    let grid = residual_base_grid(cfg.dim)?;
                    let reports: Vec<PositivityReport> = positivity_scan(&specs, t, &grid)
                        .into_iter()
                        .collect::<Result<_, _>>()?;
                    let path = out_path(common, "positivity.json")?;
                    save_json(&reports, &path)?;
                    let positive = reports.iter().filter(|r| r.is_positive()).count();
                    println!(
                        "{positive}/{} heat kernels positive, wrote {}",
                        reports.len(),
                        path.display()
                    );
                }
            }
        }
        Command::Simulate => {
            let cfg = load_config(common)?;
            let outcome = run_max_principle(&cfg)?;
            let csv = cfg
                .csv_path
                .clone()
                .unwrap_or(out_path(common, "series.csv")?);
            let json = cfg
                .report_path
                .clone()
                .unwrap_or(out_path(common, "report.json")?);
            outcome.save(&csv, &json)?;
            let r = &outcome.report;
            for (p, g) in &r.growth_constant {
                println!("p = {p}: growth constant {g:?}");
            }
            println!(
                "bound constant {} (threshold {}), pass = {}",
                r.bound_constant, r.threshold, r.pass
            );
            if let Some(f) = &r.failure {
                return Err(Failure::Numerical(f.clone()));
            }
            if !r.pass {
                return Err(Failure::Verification(
                    "growth exceeds the assembled bound".into(),
                ));
            }
        }
        Command::Sweep { axes, cap } => {
            let cfg = load_config(common)?;
            let (result, outcomes) = sweep(&cfg, &axes, cap)?;
            for (i, o) in outcomes.iter().enumerate() {
                if let Some(o) = o {
                    o.series
                        .save_csv(&out_path(common, &format!("cell_{i:03}.csv"))?)?;
                }
            }
            let path = out_path(common, "sweep.json")?;
            save_json(&result, &path)?;
            let a = &result.aggregate;
            println!(
                "{} cells: {} passed, {} failed, {} errors; wrote {}",
                a.cells,
                a.passed,
                a.failed,
                a.errors,
                path.display()
            );
            if !a.pass {
                return Err(Failure::Verification("some sweep cells failed".into()));
            }
        }
        Command::Verify { constant_scale } => {
            let report = verify_suite(&VerifyOptions { constant_scale });
            save_json(&report, &out_path(common, "verify.json")?)?;
            for p in &report.properties {
                println!(
                    "{} {}: {}",
                    if p.pass { "PASS" } else { "FAIL" },
                    p.name,
                    p.detail
                );
            }
            if !report.pass {
                return Err(Failure::Verification("property suite failed".into()));
            }
        }
        Command::Independence { amplitudes } => {
            let cfg = load_config(common)?;
            let (report, outcomes) = run_v_independence(&cfg, &amplitudes)?;
            for (a, o) in amplitudes.iter().zip(&outcomes) {
                o.series
                    .save_csv(&out_path(common, &format!("amplitude_{a}.csv"))?)?;
            }
            save_json(&report, &out_path(common, "independence.json")?)?;
            for (p, gs) in &report.growth_constants {
                println!("p = {p}: {gs:?} uniform = {}", report.uniform[p]);
            }
            if report.reports.iter().any(|r| r.failure.is_some()) {
                return Err(Failure::Numerical("a run failed".into()));
            }
            if !report.pass {
                return Err(Failure::Verification(
                    "growth constants are not uniform".into(),
                ));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failure: {m}");
            ExitCode::from(3)
        }
    }
}
