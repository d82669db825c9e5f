use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use calmks::experiments::simulate::{simulate, write_manifest, write_report, write_trajectory};
use calmks::experiments::{convergence_study, load_snapshot, RunConfig};
use calmks::norms::{hs_norm, l2_norm, linf_norm};
use calmks::{Error, Grid};

#[derive(Parser)]
#[command(name = "calmks", version, about = "Calmed Kuramoto-Sivashinsky solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration, writing snapshots and a norm table.
    Simulate(RunArgs),
    /// Sweep epsilon against the uncalmed reference and fit error slopes.
    Converge {
        #[command(flatten)]
        run: RunArgs,
        /// Worker threads for the sweep (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the L2, L-infinity and H2 norms of a stored snapshot.
    Norms {
        /// Snapshot payload (.bin) or metadata (.meta) path.
        snapshot: PathBuf,
    },
}

/// Config file plus per-key overrides. Values are parsed exactly as in the
/// config file.
#[derive(Args)]
struct RunArgs {
    /// key = value config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// scalar or vector
    #[arg(long)]
    form: Option<String>,
    /// identity, type1, type2 or type3
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    /// Final time.
    #[arg(long = "T")]
    t_end: Option<String>,
    #[arg(long)]
    snapshot_every: Option<String>,
    /// grad-sines, high-osc or file:<snapshot>
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    output_dir: Option<String>,
    /// Comma-separated calming parameters.
    #[arg(long)]
    eps_list: Option<String>,
    /// Advective CFL number above which a warning is reported.
    #[arg(long)]
    cfl: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let overrides = [
            ("form", &self.form),
            ("kind", &self.kind),
            ("epsilon", &self.epsilon),
            ("lambda", &self.lambda),
            ("n", &self.n),
            ("dt", &self.dt),
            ("T", &self.t_end),
            ("snapshot_every", &self.snapshot_every),
            ("init", &self.init),
            ("output_dir", &self.output_dir),
            ("eps_list", &self.eps_list),
            ("cfl", &self.cfl),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, v, 0).with_context(|| format!("invalid --{key}"))?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run_simulate(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let cfg = args.resolve()?;
    let traj = match simulate(&cfg) {
        Ok(traj) => traj,
        Err(Error::BlowUp { t, norm_name, value }) => {
            eprintln!("aborted: blow-up at t = {t} ({norm_name} = {value})");
            return Ok(ExitCode::from(3));
        }
        Err(e) => return Err(e.into()),
    };
    write_manifest(&cfg)?;
    write_trajectory(&cfg, &traj)?;
    for w in &traj.cfl_warnings {
        eprintln!(
            "warning: t = {}: dt = {} exceeds advective limit {}",
            w.t, w.dt, w.limit
        );
    }
    println!(
        "wrote {} snapshots to {} (t = {})",
        traj.snapshots.len(),
        cfg.output_dir.display(),
        traj.final_time
    );
    Ok(ExitCode::SUCCESS)
}

fn run_converge(args: &RunArgs, jobs: Option<usize>) -> anyhow::Result<ExitCode> {
    let cfg = args.resolve()?;
    cfg.validate_sweep()?;
    if let Some(j) = jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .context("configuring worker pool")?;
    }
    let report = convergence_study(&cfg, cfg.kind, &cfg.eps_list)?;
    write_manifest(&cfg)?;
    let csv = write_report(&cfg, &report)?;
    println!("kind {}: {} runs written to {}", report.kind, report.series.len(), csv.display());
    match &report.fits {
        Some(f) => {
            for (name, fit) in [
                ("Linf(L2)", f.linf_l2),
                ("Linf(Linf)", f.linf_linf),
                ("L2(H2)", f.l2_h2),
            ] {
                println!("slope {name:<11} {:.4} (rms residual {:.2e})", fit.slope, fit.residual);
            }
        }
        None => println!("slopes unavailable: fewer than two usable runs"),
    }
    for (eps, e) in &report.failures {
        eprintln!("failed: eps = {eps}: {e}");
    }
    Ok(if report.is_complete() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn run_norms(path: &Path) -> anyhow::Result<ExitCode> {
    let (field, meta) = load_snapshot(path)?;
    let grid = Grid::new(meta.n)?;
    let spec = grid.forward(&field)?;
    println!("l2 {:.17e}", l2_norm(&spec, &grid));
    println!("linf {:.17e}", linf_norm(&field, &grid));
    println!("h2 {:.17e}", hs_norm(&spec, 2.0, &grid));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => run_simulate(args),
        Command::Converge { run, jobs } => run_converge(run, *jobs),
        Command::Norms { snapshot } => run_norms(snapshot),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
