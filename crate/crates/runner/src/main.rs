use alpha_fluids::config::{parse_config_keys, Experiment};
use alpha_fluids::experiments::{run_experiment, RunError};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Run one experiment of the alpha-fluids laboratory.
///
/// Exit status: 0 on success, 2 on a numerical abort (blow-up, CFL,
/// particle crossing), 1 on any usage, configuration or I/O error.
#[derive(Debug, Parser)]
#[command(name = "alpha-fluids", version)]
struct Cli {
    /// simulate2d | blob | ch | curvature | visc-limit | alpha-sweep | jacobi | flowmap
    experiment: String,
    /// Sectioned key=value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides `[run] seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweeps; 1 gives the byte-reproducible mode.
    #[arg(long, env = "ALPHA_FLUIDS_THREADS")]
    threads: Option<usize>,
}

fn run(cli: Cli) -> Result<(), RunError> {
    let experiment: Experiment = cli.experiment.parse().map_err(RunError::Usage)?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| RunError::Usage(format!("cannot read {}: {e}", cli.config.display())))?;
    let (mut cfg, keys) = parse_config_keys(&text)?;
    if let Some(line) = keys.get("run.experiment") {
        if cfg.experiment != experiment {
            return Err(RunError::Usage(format!(
                "{} line {line} selects `{}` but the command line asks for `{}`",
                cli.config.display(),
                cfg.experiment.name(),
                experiment.name()
            )));
        }
    }
    cfg.experiment = experiment;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(RunError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| RunError::Usage(e.to_string()))?;
    }
    log::info!("running {} into {}", experiment.name(), cli.out.display());
    let outcome = run_experiment(&cfg, &cli.out)?;
    for (k, v) in &outcome.recorder.summary {
        println!("{k}={v}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("alpha-fluids: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
