use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use theta_fixpoint_cli::config::{parse_experiment, Mode};
use theta_fixpoint_cli::report::{emit_report, emit_trace_csv, ReportFormat};
use theta_fixpoint_cli::run::run_experiment;

/// Verify, certify and solve fixed-point experiments on theta-metric spaces.
#[derive(Parser)]
#[command(name = "thetafp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of the configured action, space and zeta.
    Verify(RunArgs),
    /// Certify the contraction margins on sampled pairs.
    Certify(CertifyArgs),
    /// Run Picard iteration from the configured starts.
    Solve(RunArgs),
    /// Run the whole pipeline: axioms, both margins, solver diagnostics.
    Full(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Report format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the first solver trace as CSV to this path.
    #[arg(long)]
    trace_csv: Option<PathBuf>,
    /// Override the plan seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the solver tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the solver iteration budget.
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: RunArgs,
    /// Certify the modified condition (compare against M(x,y)).
    #[arg(long)]
    modified: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

fn execute(args: &RunArgs, mode: Mode) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut exp = parse_experiment(&text)
        .with_context(|| format!("parsing {}", args.config.display()))?;
    exp.set_mode(mode);
    if let Some(seed) = args.seed {
        exp.override_seed(seed);
    }
    if let Some(tol) = args.tol {
        anyhow::ensure!(tol > 0.0 && tol.is_finite(), "--tol must be positive");
        exp.override_tol(tol);
    }
    if let Some(max_iter) = args.max_iter {
        anyhow::ensure!(max_iter > 0, "--max-iter must be positive");
        exp.override_max_iter(max_iter);
    }

    let report = run_experiment(&exp)?;
    let format = match args.format {
        Format::Json => ReportFormat::Json,
        Format::Human => ReportFormat::Human,
    };
    print!("{}", emit_report(&report, format));

    if let Some(path) = &args.trace_csv {
        let entry = report
            .solve
            .as_ref()
            .and_then(|s| s.entries.first())
            .context("--trace-csv needs a mode that solves (solve or full)")?;
        std::fs::write(path, emit_trace_csv(&entry.result, &exp.space))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.all_green())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, mode) = match &cli.command {
        Command::Verify(args) => (args, Mode::VerifyAxioms),
        Command::Certify(c) => {
            (&c.common, if c.modified { Mode::CertifyModifiedZ } else { Mode::CertifyZ })
        }
        Command::Solve(args) => (args, Mode::Solve),
        Command::Full(args) => (args, Mode::Full),
    };
    match execute(args, mode) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
