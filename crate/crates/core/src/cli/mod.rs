//! Command-line front end: the ring file language, the directive runner
//! and report output.

pub mod dsl;
pub mod model;
pub mod report;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use report::Report;
use run::{run_source, RunOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// Verify structural properties of orders in products of real number fields.
#[derive(Debug, Parser)]
#[command(name = "poring-lab", version)]
pub struct Args {
    /// Ring files to run.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, env = "PORING_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Run files and directives concurrently.
    #[arg(long)]
    pub parallel: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time per directive.
    #[arg(long)]
    pub timings: bool,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn render(reports: &[Report], format: Format) -> String {
    match format {
        Format::Text => reports
            .iter()
            .map(Report::to_text)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Structured => {
            if let [one] = reports {
                one.to_json()
            } else {
                serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"
            }
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with(args: Args) -> i32 {
    let opts = RunOptions {
        seed: args.seed,
        parallel: args.parallel,
        timings: args.timings,
    };
    let job = |path: &PathBuf| -> Result<Report, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        run_source(&path.display().to_string(), &text, opts)
            .map_err(|e| format!("{}: {e}", path.display()))
    };
    let results: Vec<Result<Report, String>> = if args.parallel {
        args.files.par_iter().map(job).collect()
    } else {
        args.files.iter().map(job).collect()
    };
    let mut reports = Vec::new();
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(msg) => {
                eprintln!("error: {msg}");
                return EXIT_USAGE;
            }
        }
    }
    let output = render(&reports, args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &output) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{output}"),
    }
    if reports.iter().all(Report::passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
