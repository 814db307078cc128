use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dunkl_harmonics::cli::{emit, run_suite, OutputFormat, RunConfig, Suite};
use dunkl_harmonics::cli::config::parse_list;
use dunkl_harmonics::Error;

#[derive(Parser)]
#[command(name = "dunkl-harmonics", version, about = "Numerical checks for Dunkl harmonic analysis on the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit one record per check.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// key = value file; values override the defaults
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
        /// comma-separated exponents
        #[arg(long)]
        p: Option<String>,
        /// csv or json
        #[arg(long)]
        output: Option<String>,
        /// write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool, Error> {
    let Command::Verify {
        suite,
        config,
        lambda,
        p,
        output,
        out,
    } = cli.command;
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(l) = lambda {
        cfg.lambda = l;
    }
    if let Some(p) = p {
        cfg.p_list = parse_list("p_list", &p)?;
    }
    if let Some(o) = output {
        cfg.output = o.parse::<OutputFormat>()?;
    }
    let report = run_suite(&cfg, suite)?;
    let bytes = emit(&report, cfg.output);
    match out {
        Some(path) => std::fs::write(&path, &bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Error::Io(e.to_string()))?,
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Config { .. } | Error::Io(_) | Error::Parse(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
