//! Command-line front end: run programs to produce spectra, rank blocks,
//! and score a known fault's rank.
//!
//! Exit status is 0 on success (warnings go to stderr) and 2 on any usage
//! or data error.

use std::fs;
use std::num::NonZeroU64;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sflm::localizer::{evaluate_rank, localize, SuspiciousnessReport};
use sflm::minilang::{self, build_cfg, parse_suite, run_suite};
use sflm::spectrum::SpectrumMatrix;

#[derive(Parser)]
#[command(
    name = "sflm",
    version,
    about = "Rank a program's basic blocks by suspiciousness from coverage spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a MiniLang program over a test suite and write the spectrum CSV
    Run {
        /// MiniLang source file
        program: PathBuf,
        /// Test-suite file (see docs/minilang.md for the format)
        suite: PathBuf,
        /// Spectrum CSV output path; stdout when omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Per-run step budget; runs that exhaust it count as failing
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
    },
    /// Rank blocks of a spectrum CSV by suspiciousness
    Localize {
        /// Spectrum CSV file
        spectrum: PathBuf,
        /// Attach Tarantula, Ochiai, Jaccard, and DStar(2) columns
        #[arg(long)]
        with_baselines: bool,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Report how well the ranking places a known faulty block
    Eval {
        /// Spectrum CSV file
        spectrum: PathBuf,
        /// Block id of the true fault
        #[arg(long)]
        fault: usize,
    },
    /// Render a JSON report as a text table
    Report {
        /// Report JSON file, as produced by `localize --format json`
        report: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<(), String> {
    match command {
        Command::Run {
            program,
            suite,
            output,
            fuel,
        } => cmd_run(&program, &suite, output.as_deref(), fuel),
        Command::Localize {
            spectrum,
            with_baselines,
            format,
        } => cmd_localize(&spectrum, with_baselines, format),
        Command::Eval { spectrum, fault } => cmd_eval(&spectrum, fault),
        Command::Report { report } => cmd_report(&report),
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_spectrum(path: &Path) -> Result<SpectrumMatrix, String> {
    let text = read_file(path)?;
    SpectrumMatrix::from_csv(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_run(
    program_path: &Path,
    suite_path: &Path,
    output: Option<&Path>,
    fuel: u64,
) -> Result<(), String> {
    let source = read_file(program_path)?;
    let program =
        minilang::parse(&source).map_err(|e| format!("{}: {e}", program_path.display()))?;
    let cfg = build_cfg(&program);

    let suite_text = read_file(suite_path)?;
    let cases = parse_suite(&suite_text).map_err(|e| format!("{}: {e}", suite_path.display()))?;

    let fuel = NonZeroU64::new(fuel).expect("clap enforces fuel >= 1");
    let (spectrum, warnings) =
        run_suite(&program, &cfg, &cases, fuel).map_err(|e| e.to_string())?;
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }

    let csv = spectrum.to_csv();
    match output {
        Some(path) => fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_localize(spectrum_path: &Path, with_baselines: bool, format: Format) -> Result<(), String> {
    let matrix = read_spectrum(spectrum_path)?;
    let report = localize(&matrix, with_baselines);
    for caveat in &report.caveats {
        eprintln!("warning: {caveat}");
    }
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(())
}

fn cmd_eval(spectrum_path: &Path, fault: usize) -> Result<(), String> {
    let matrix = read_spectrum(spectrum_path)?;
    let report = localize(&matrix, false);
    let fraction = evaluate_rank(&report, fault).map_err(|e| e.to_string())?;
    println!("{fraction:.4}");
    Ok(())
}

fn cmd_report(report_path: &Path) -> Result<(), String> {
    let text = read_file(report_path)?;
    let report = SuspiciousnessReport::from_json(&text)
        .map_err(|e| format!("{}: {e}", report_path.display()))?;
    print!("{}", report.to_text());
    Ok(())
}
