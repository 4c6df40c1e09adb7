use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use memhopf::error::{Error, Result};
use memhopf_cli::{cmd_analyze, cmd_curves, cmd_normalform, cmd_simulate, load_config, Outcome};

/// Stability, Hopf and normal-form analysis of the memory-diffusion predator-prey model.
#[derive(Parser, Debug)]
#[command(name = "memhopf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports and CSV files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Conditions, thresholds, critical delays and a stability verdict.
    Analyze,
    /// Hopf bifurcation curves in the (d21, tau) plane.
    Curves,
    /// Direction and stability of the bifurcating periodic orbits.
    Normalform,
    /// Method-of-lines simulation with periodicity diagnostics.
    Simulate,
}

/// `MEMHOPF_LOG=quiet` silences warnings and file listings on stderr.
fn quiet() -> bool {
    std::env::var("MEMHOPF_LOG")
        .map(|v| v.eq_ignore_ascii_case("quiet"))
        .unwrap_or(false)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Inconclusive(format!("thread pool: {e}")))?;
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::MissingKey("--config".into()))?;
    let cfg = load_config(path)?;
    match cli.command {
        Command::Analyze => cmd_analyze(&cfg, &cli.out),
        Command::Curves => cmd_curves(&cfg, &cli.out),
        Command::Normalform => cmd_normalform(&cfg, &cli.out),
        Command::Simulate => cmd_simulate(&cfg, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if !quiet() {
                for w in &outcome.warnings {
                    eprintln!("warning: {w}");
                }
                for f in &outcome.files {
                    eprintln!("wrote {}", f.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.code());
            ExitCode::from(2)
        }
    }
}
