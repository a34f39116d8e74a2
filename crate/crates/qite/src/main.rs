use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Ground-state trajectories of spin Hamiltonians by exact ITE, QITE, and
/// varQITE. Writes `trajectory.csv` and `summary.json` to the output
/// directory.
#[derive(Parser)]
#[command(name = "qite", version)]
struct Args {
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Output directory; overrides `output` from the config. Defaults to
    /// the current directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Reserved for stochastic extensions; all current methods are
    /// deterministic.
    #[arg(long)]
    seed: Option<u64>,

    /// Per-step diagnostics on stderr.
    #[arg(long, short)]
    verbose: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    env_logger::Builder::new()
        .filter_level(if args.verbose {
            log::LevelFilter::Debug
        } else {
            log::LevelFilter::Warn
        })
        .parse_default_env()
        .init();
    if args.seed.is_some() {
        log::warn!("--seed is accepted but unused: all methods are deterministic");
    }

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::FAILURE;
        }
    };
    let cfg = match qite::cli::parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let out_dir = args
        .out
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    match qite::cli::run(&cfg, &out_dir) {
        Ok(outcome) => {
            if let Some(e_gs) = outcome.e_gs {
                println!("e_gs          = {e_gs:.12}");
            }
            println!("final energy  = {:.12}", outcome.final_energy);
            if let Some(f) = outcome.final_fidelity {
                println!("final fidelity = {f:.12}");
            }
            println!("wrote {}", outcome.trajectory_path.display());
            println!("wrote {}", outcome.summary_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
