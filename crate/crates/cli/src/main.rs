use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use ppcodes::distance::{DeltaConvention, DEFAULT_EXACT_BUDGET};
use ppcodes::fixtures;
use ppcodes::pipeline::{self, InputFormat, RunConfig, RunError};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Matrix,
    Graph,
    Clutter,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    Floor,
    Ceil,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

/// Length, dimension, regularity and distance bounds of projective
/// parameterized codes.
#[derive(Debug, Parser)]
#[command(name = "ppcodes", version)]
struct Args {
    /// JSON input file.
    #[arg(long, required_unless_present = "fixtures")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "matrix")]
    kind: Kind,
    /// Last degree in the table (default (m-1)(q-2) - 1).
    #[arg(long)]
    dmax: Option<u32>,
    /// Codeword-symbol operations per degree for exact distance; 0 disables it.
    #[arg(long, default_value_t = DEFAULT_EXACT_BUDGET)]
    exact_budget: u64,
    #[arg(long, value_enum, default_value = "floor")]
    delta_convention: Convention,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Recompute the three worked examples and compare every published cell.
    #[arg(long, conflicts_with = "input")]
    fixtures: bool,
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn run_fixtures() -> ExitCode {
    match fixtures::check_all() {
        Ok(report) => {
            for m in &report.mismatches {
                let d = m.d.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
                println!("MISMATCH {} d={} {}: expected {}, got {}", m.example, d, m.column, m.expected, m.got);
            }
            println!("{} cells checked, {} mismatches", report.cells_checked, report.mismatches.len());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.fixtures {
        return run_fixtures();
    }
    let path = args.input.expect("clap enforces --input");
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return fail(&RunError::Input(format!("{}: {e}", path.display()))),
    };
    let format = match args.kind {
        Kind::Matrix => InputFormat::Matrix,
        Kind::Graph => InputFormat::Graph,
        Kind::Clutter => InputFormat::Clutter,
    };
    let (q, input) = match pipeline::parse_input(&text, format) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let config = RunConfig {
        d_max: args.dmax,
        exact_budget: args.exact_budget,
        convention: match args.delta_convention {
            Convention::Floor => DeltaConvention::Floor,
            Convention::Ceil => DeltaConvention::Ceil,
        },
        ..RunConfig::default_for(q, input)
    };
    let report = match pipeline::run(&config) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    match args.format {
        Format::Table => print!("{}", pipeline::render_text(&report)),
        Format::Csv => print!("{}", report.table.to_csv()),
        Format::Json => println!("{}", report.to_json()),
    }
    for e in &report.exhausted {
        eprintln!("budget exhausted: {e}");
    }
    for c in report.checks.iter().filter(|c| c.status == ppcodes::checks::CheckStatus::Fail) {
        eprintln!("check failed: {c}");
    }
    ExitCode::from(report.exit_code() as u8)
}
