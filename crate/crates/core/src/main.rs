//! Command-line front end: single runs, sweeps and energy reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use relvac::harness::persist;
use relvac::harness::{
    limit_sweep, refinement_study, run_simulation, stability_probe, viscosity_sweep, CompareNorm, Config, RateReport,
    SweepKind, SweepSpec,
};

#[derive(Parser)]
#[command(name = "relvac", version, about = "Relativistic vacuum-boundary Euler solver and limit studies")]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and persist the record.
    Simulate {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output directory for the run record.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Error against the infinite-c reference for a list of light speeds.
    LimitSweep(SweepArgs),
    /// Distance to the inviscid run for a list of viscosities.
    ViscositySweep(SweepArgs),
    /// Self-convergence over nested grids (values are cell counts).
    Refine(SweepArgs),
    /// Amplification of a small velocity perturbation.
    Stability {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated energy time series of one run.
    EnergyReport {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Overrides applied on top of `--config` (or the defaults).
#[derive(Args, Clone)]
struct ConfigArgs {
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    n_cells: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    #[arg(long)]
    output_every: Option<String>,
    /// builtin:demo or file:PATH
    #[arg(long)]
    init: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Config::parse(&text)?
            }
            None => Config::default(),
        };
        let overrides = [
            ("mode", &self.mode),
            ("gamma", &self.gamma),
            ("c", &self.c),
            ("mu", &self.mu),
            ("cfl", &self.cfl),
            ("n_cells", &self.n_cells),
            ("delta", &self.delta),
            ("t_end", &self.t_end),
            ("output_every", &self.output_every),
            ("init", &self.init),
        ];
        for (key, val) in overrides {
            if let Some(v) = val {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Comma-separated sweep values (a default list is used when absent).
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Comparison time (default: t_end).
    #[arg(long)]
    horizon: Option<f64>,
    /// sup or weighted-l2
    #[arg(long, default_value = "sup")]
    norm: String,
    /// File to write the report to.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_or_print(out: Option<&Path>, name: &str, text: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn sweep(kind: SweepKind, args: SweepArgs) -> Result<RateReport> {
    let cfg = args.cfg.resolve()?;
    let values = args.values.unwrap_or_else(|| match kind {
        SweepKind::LightSpeed => vec![8.0, 16.0, 32.0, 64.0, 128.0],
        SweepKind::Viscosity => vec![1e-2, 5e-3, 2.5e-3],
        _ => vec![64.0, 128.0, 256.0],
    });
    let horizon = args.horizon.unwrap_or(cfg.t_end);
    let norm: CompareNorm = args.norm.parse()?;
    let spec = SweepSpec::new(kind, values, cfg, horizon)?.with_norm(norm);
    let report = match kind {
        SweepKind::LightSpeed => limit_sweep(&spec)?,
        SweepKind::Viscosity => viscosity_sweep(&spec)?,
        _ => refinement_study(&spec)?,
    };
    write_or_print(args.out.as_deref(), "report.txt", &report.to_text())?;
    Ok(report)
}

fn run(cli: Cli) -> Result<bool> {
    Ok(match cli.command {
        Command::Simulate { cfg, out } => {
            let record = run_simulation(&cfg.resolve()?)?;
            if let Some(dir) = out {
                persist::save(&record, &dir)?;
                println!("wrote {}", dir.display());
            } else {
                print!("{}", persist::diagnostics_csv(&record.rows));
            }
            if let Some(a) = &record.abort {
                eprintln!("run aborted at t={}: {}", a.t, a.message);
            }
            record.completed()
        }
        Command::LimitSweep(a) => sweep(SweepKind::LightSpeed, a)?.pass,
        Command::ViscositySweep(a) => sweep(SweepKind::Viscosity, a)?.pass,
        Command::Refine(a) => sweep(SweepKind::Refinement, a)?.pass,
        Command::Stability { cfg, epsilon, out } => {
            let amp = stability_probe(&cfg.resolve()?, epsilon)?;
            let text = format!("epsilon = {epsilon}\namplification = {amp}\n");
            write_or_print(out.as_deref(), "stability.txt", &text)?;
            amp.is_finite()
        }
        Command::EnergyReport { cfg, out } => {
            let record = run_simulation(&cfg.resolve()?)?;
            let mut text = String::from("t,E_total,E_u,E_v,E_w\n");
            for row in &record.rows {
                if let Some(e) = &row.energy {
                    text.push_str(&format!("{},{},{},{},{}\n", row.t, e.total, e.e_u, e.e_v, e.e_w));
                }
            }
            write_or_print(out.as_deref(), "energy.csv", &text)?;
            if let Some(a) = &record.abort {
                eprintln!("run aborted at t={}: {}", a.t, a.message);
            }
            record.completed()
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
