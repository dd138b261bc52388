use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nhqc_cli::record::Outputs;
use nhqc_cli::{cmd_check_holonomy, cmd_dfs, cmd_gate, cmd_sweep, CliError, Overrides, ResultRecord, RunConfig};

#[derive(Parser)]
#[command(name = "nhqc", version, about = "Composite nonadiabatic holonomic gate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an ideal gate and, with an [error] section, its error-affected version.
    Gate(Common),
    /// Infidelity sweep over the error magnitude with a log-log fit.
    Sweep(Common),
    /// Check the holonomy conditions for a pulse schedule.
    CheckHolonomy(Common),
    /// Logical gate fidelity under collective dephasing kicks.
    Dfs(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Random seed for Monte-Carlo runs.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Pass/fail tolerance for holonomy checks and target matching.
    #[arg(long, value_name = "X")]
    tolerance: Option<f64>,
}

fn summary(record: &ResultRecord) -> String {
    match &record.outputs {
        Outputs::Gate(g) => match &g.fidelity {
            Some(f) => format!(
                "target distance {:.3e}, infidelity {:.6e}",
                g.target_distance, f.infidelity
            ),
            None => format!("target distance {:.3e}", g.target_distance),
        },
        Outputs::Sweep(s) => format!(
            "slope {:.4} ± {:.4}, r² {:.6}, {} points",
            s.fit.slope, s.fit.slope_stderr, s.fit.r_squared, s.fit.points_used
        ),
        Outputs::Holonomy(h) => format!(
            "cond1 {:.3e}, cond2 {:.3e}, passed {}",
            h.report.cond1_residual, h.report.cond2_max, h.report.passed
        ),
        Outputs::Dfs(d) => d
            .rows
            .iter()
            .map(|r| {
                format!(
                    "kappa {}: encoded {:.15}, unencoded {:.6}",
                    r.kappa, r.encoded.mean_fidelity, r.unencoded.mean_fidelity
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, cmd): (&Common, fn(&RunConfig, &Overrides) -> nhqc_cli::Result<_>) = match &cli.command {
        Command::Gate(c) => (c, cmd_gate),
        Command::Sweep(c) => (c, cmd_sweep),
        Command::CheckHolonomy(c) => (c, cmd_check_holonomy),
        Command::Dfs(c) => (c, cmd_dfs),
    };
    let cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ov = Overrides { out: common.out.clone(), seed: common.seed, tolerance: common.tolerance };
    let (record, paths) = cmd(&cfg, &ov)?;
    println!("{}", summary(&record));
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
