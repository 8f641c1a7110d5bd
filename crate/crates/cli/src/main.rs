use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use qrad_cli::config::Injection;
use qrad_cli::run::{decode_debug, execute, plan, render_plan};
use qrad_cli::{parse_config, CliError, RunConfig, SweepKind};
use qrad_core::arch::GraphSpec;
use qrad_core::codes::CodeSpec;

/// Radiation fault-injection campaigns on surface codes.
///
/// Settings come from an optional config file (`key = value` per line, keys
/// as the long flags with `-` written `_`) and are overridden by flags.
#[derive(Parser, Debug)]
#[command(name = "qrad", version)]
struct Cli {
    /// Sweep to run.
    #[arg(value_enum)]
    sweep_kind: Option<SweepKind>,
    /// Sweep to run, as an alternative to the positional argument.
    #[arg(long, value_enum)]
    sweep: Option<SweepKind>,
    /// Config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code as CLASS:dZ,dX, e.g. rep:5,1 or xxzz:3,3. Repeatable.
    #[arg(long)]
    code: Vec<String>,
    /// Architecture: linear:N, mesh:R,C, complete:N or a preset name. Repeatable.
    #[arg(long)]
    arch: Vec<String>,
    /// Physical error rate [default: 0.01; surface sweep: grid].
    #[arg(long)]
    p: Option<f64>,
    /// Peak reset probability [default: 1; surface sweep: grid].
    #[arg(long)]
    peak: Option<f64>,
    /// Temporal decay rate of the fault.
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of time bins.
    #[arg(long)]
    n_s: Option<usize>,
    /// Points per axis of the surface grid.
    #[arg(long)]
    grid: Option<usize>,
    /// Root code qubit of the surface sweep.
    #[arg(long)]
    root: Option<usize>,
    /// Erased-set size for the spread sweep. Repeatable.
    #[arg(long)]
    k: Vec<usize>,
    /// Erased sets sampled per size.
    #[arg(long)]
    samples: Option<usize>,
    /// Shots per point.
    #[arg(long)]
    shots: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the point list without simulating.
    #[arg(long)]
    dry_run: bool,
    /// Error for decode-debug, e.g. x@data2 or reset@ancilla. Repeatable.
    #[arg(long)]
    inject: Vec<String>,
}

fn config_from(cli: &Cli) -> Result<RunConfig, CliError> {
    let sweep = match (cli.sweep_kind, cli.sweep) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Config(format!("sweep: `{}` and `{}` both given", a.as_str(), b.as_str())))
        }
        (a, b) => a.or(b),
    };
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config: cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut config = parse_config(&text, sweep)?;
    if let Some(s) = sweep {
        config.sweep = s;
    }
    let bad = |name: &str, e: String| CliError::Config(format!("{name}: {e}"));
    if !cli.code.is_empty() {
        config.codes = cli
            .code
            .iter()
            .map(|s| s.parse::<CodeSpec>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad("code", e.to_string()))?;
    }
    if !cli.arch.is_empty() {
        config.archs = cli
            .arch
            .iter()
            .map(|s| s.parse::<GraphSpec>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad("arch", e.to_string()))?;
    }
    if !cli.inject.is_empty() {
        config.inject = cli
            .inject
            .iter()
            .map(|s| s.parse::<Injection>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad("inject", e))?;
    }
    if !cli.k.is_empty() {
        config.ks = cli.k.clone();
    }
    config.p = cli.p.or(config.p);
    config.peak = cli.peak.or(config.peak);
    config.threads = cli.threads.or(config.threads);
    config.gamma = cli.gamma.unwrap_or(config.gamma);
    config.n_s = cli.n_s.unwrap_or(config.n_s);
    config.grid = cli.grid.unwrap_or(config.grid);
    config.root = cli.root.unwrap_or(config.root);
    config.samples = cli.samples.unwrap_or(config.samples);
    config.shots = cli.shots.unwrap_or(config.shots);
    config.seed = cli.seed.unwrap_or(config.seed);
    if let Some(out) = &cli.out {
        config.out = out.clone();
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = config_from(cli)?;
    if config.sweep == SweepKind::DecodeDebug {
        print!("{}", decode_debug(&config)?);
        return Ok(());
    }
    let points = plan(&config)?;
    if cli.dry_run {
        print!("{}", render_plan(&points));
        return Ok(());
    }
    let results = execute(&config, &points)?;
    let errors: usize = results.iter().map(|r| r.rate.errors).sum();
    let shots: usize = results.iter().map(|r| r.rate.shots).sum();
    println!("{} points, {errors} logical errors in {shots} shots, written to {}", results.len(), config.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Config(_)) {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
