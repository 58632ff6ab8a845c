use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use coupler::sweep::{
    compare_report, emit_csv, emit_plotscript, parse_config_with, run_sweep, write_csv, FailurePolicy,
    SweepOptions,
};
use coupler::Error;

#[derive(Parser)]
#[command(
    name = "coupler",
    version,
    about = "Nonclassicality witnesses for an asymmetric nonlinear optical coupler"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate witnesses over a grid of interaction lengths.
    Sweep {
        /// Configuration file (key=value lines).
        #[arg(long)]
        config: PathBuf,
        /// Also evaluate the exact Fock-space reference.
        #[arg(long)]
        oracle: bool,
        /// CSV output path; stdout when neither this nor `out=` is given.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Gnuplot script output path.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// JSON comparison report path (needs the oracle).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads for grid points.
        #[arg(long, value_name = "N")]
        parallel: Option<usize>,
        /// Abort on the first failing grid point instead of skipping it.
        #[arg(long)]
        fail_fast: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 4,
        e if e.is_numeric() => 3,
        _ => 2,
    }
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    config: PathBuf,
    oracle: bool,
    out: Option<PathBuf>,
    plot: Option<PathBuf>,
    report: Option<PathBuf>,
    parallel: Option<usize>,
    fail_fast: bool,
) -> Result<(), Error> {
    let text = fs::read_to_string(&config)?;
    let overrides: &[(&str, &str)] = if oracle { &[("oracle", "true")] } else { &[] };
    let cfg = parse_config_with(&text, overrides)?;
    let out_path = out.or_else(|| cfg.out.clone());
    let plot_path = plot.or_else(|| cfg.plot.clone());
    let report_path = report.or_else(|| cfg.report.clone());
    if report_path.is_some() && !cfg.oracle_enabled() {
        return Err(Error::MissingEngine("report requested without the oracle".into()));
    }

    let opts = SweepOptions {
        policy: if fail_fast {
            FailurePolicy::FailFast
        } else {
            FailurePolicy::Skip
        },
        threads: parallel,
    };
    let result = run_sweep(&cfg, opts)?;
    for s in &result.skipped {
        eprintln!("warning: skipped point {} (z = {}): {}", s.index, s.z, s.reason);
    }
    if result.rows.is_empty() {
        return Err(Error::InvalidParams("every grid point failed".into()));
    }

    let report = report_path
        .as_ref()
        .map(|_| compare_report(&result))
        .transpose()?;
    match &out_path {
        Some(p) => emit_csv(&result, p)?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_csv(&result, &mut lock)?;
            lock.flush()?;
        }
    }
    if let Some(p) = &plot_path {
        let csv_name = out_path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "sweep.csv".into());
        emit_plotscript(&result, &csv_name, p)?;
    }
    if let (Some(p), Some(r)) = (&report_path, report) {
        fs::write(p, r.to_json() + "\n")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Sweep {
            config,
            oracle,
            out,
            plot,
            report,
            parallel,
            fail_fast,
        } => sweep(config, oracle, out, plot, report, parallel, fail_fast),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
