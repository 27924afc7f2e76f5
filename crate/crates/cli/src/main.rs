// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod emit;
mod error;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use commands::{AutonomousArgs, CollectiveArgs, QubitArgs};
use config::Resolver;
use emit::{write_csv, write_json, Format};
use error::{invalid, CliError};

/// Thermometry bounds and strategies for open quantum probes.
#[derive(Debug, Parser)]
#[command(name = "thermoq", version)]
struct Cli {
    /// JSON object of parameters; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (stdout when absent).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Jump rates, Lamb shifts and their temperature derivatives.
    BathTable(QubitArgs),
    /// Fixed-Hamiltonian qubit bound without Lamb shift.
    BoundQubit(QubitArgs),
    /// Gauge-optimized qubit bound with Lamb shift, split into its two sources.
    BoundLamb(QubitArgs),
    /// Table of optimized low-temperature strategies.
    StrategyTable,
    /// Measure-and-prepare Fisher rate of Dicke probes versus interval.
    CollectiveScan(CollectiveArgs),
    /// Autonomous interacting probe versus interaction strength.
    AutonomousScan(AutonomousArgs),
    /// Bound for estimating the Ohmicity α.
    OhmicityBound(QubitArgs),
    /// Whether the Lamb-shift derivative keeps the QFI linear in time.
    CheckDiffusive(QubitArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::BathTable(_) => "bath-table",
            Command::BoundQubit(_) => "bound-qubit",
            Command::BoundLamb(_) => "bound-lamb",
            Command::StrategyTable => "strategy-table",
            Command::CollectiveScan(_) => "collective-scan",
            Command::AutonomousScan(_) => "autonomous-scan",
            Command::OhmicityBound(_) => "ohmicity-bound",
            Command::CheckDiffusive(_) => "check-diffusive",
        }
    }
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("THERMOQ_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(invalid(format!("THERMOQ_THREADS: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(invalid(format!(
                "THERMOQ_THREADS must be a positive integer, got {s:?}"
            ))),
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = thread_count()?;
    let mut r = Resolver::load(cli.config.as_deref())?;
    let format = match cli.format {
        Some(f) => f,
        None => match r.text(&["format"], None)?.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(invalid(format!("unknown format {other:?}"))),
        },
    };
    let output = match cli.output {
        Some(p) => Some(p),
        None => r.text(&["output"], None)?.map(PathBuf::from),
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| invalid(format!("thread pool: {e}")))?;

    let table = pool.install(|| match &cli.command {
        Command::BathTable(a) => commands::bath_table(&mut r, a),
        Command::BoundQubit(a) => commands::bound_qubit(&mut r, a),
        Command::BoundLamb(a) => commands::bound_lamb(&mut r, a),
        Command::StrategyTable => commands::strategy_table(&mut r),
        Command::CollectiveScan(a) => commands::collective_scan(&mut r, a),
        Command::AutonomousScan(a) => commands::autonomous_scan(&mut r, a),
        Command::OhmicityBound(a) => commands::ohmicity(&mut r, a),
        Command::CheckDiffusive(a) => commands::diffusive(&mut r, a),
    })?;

    let mut out: Box<dyn Write> = match &output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => write_csv(&table, &mut out)?,
        Format::Json => {
            let mut meta = Map::new();
            meta.insert("artifact".into(), json!("thermoq"));
            meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            meta.insert("command".into(), json!(cli.command.name()));
            meta.insert("config".into(), Value::Object(r.echo.clone()));
            write_json(&table, meta, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let err = invalid(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
