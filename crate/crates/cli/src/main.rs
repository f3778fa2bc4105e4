//! `vqe-chem`: UCCSD-VQE energies for small molecules.

mod config;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, ConfigFile, Overrides, RunConfig, Source};

#[derive(Debug, Parser)]
#[command(name = "vqe-chem", version, about = "UCCSD-VQE ground-state energies for small molecules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one bond length and print a summary.
    SinglePoint {
        #[command(flatten)]
        common: CommonArgs,
        /// Bond length in Å.
        #[arg(long)]
        bond_length: f64,
    },
    /// Run a bond-length scan and write a CSV.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Summarize the accuracy of scan CSVs, one molecule per file.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// INI-style settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory holding `<label>_<d>.fcidump` files.
    #[arg(long)]
    fixture_dir: Option<PathBuf>,
    /// Molecule label used in fixture file names.
    #[arg(long)]
    label: Option<String>,
    /// Built-in STO-3G geometry: h2 or h3p.
    #[arg(long)]
    geometry: Option<String>,
    /// Comma list or start:stop:step, in Å.
    #[arg(long, allow_hyphen_values = true)]
    bond_lengths: Option<String>,
    /// jw or parity.
    #[arg(long)]
    mapping: Option<String>,
    /// Drop the two symmetry qubits (parity only).
    #[arg(long)]
    reduce_two_qubits: bool,
    #[arg(long)]
    trotter_order: Option<u32>,
    #[arg(long)]
    trotter_steps: Option<usize>,
    /// spin or independent.
    #[arg(long)]
    tying: Option<String>,
    #[arg(long)]
    tol_energy: Option<f64>,
    #[arg(long)]
    tol_gradient: Option<f64>,
    #[arg(long)]
    gradient_step: Option<f64>,
    #[arg(long)]
    max_evals: Option<usize>,
    /// fd or adjoint.
    #[arg(long)]
    gradient: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(self) -> Result<RunConfig, ConfigError> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = Overrides {
            fixture_dir: self.fixture_dir,
            label: self.label,
            geometry: self.geometry,
            bond_lengths: self.bond_lengths,
            mapping: self.mapping,
            reduce_two_qubits: self.reduce_two_qubits,
            trotter_order: self.trotter_order,
            trotter_steps: self.trotter_steps,
            tying: self.tying,
            tol_energy: self.tol_energy,
            tol_gradient: self.tol_gradient,
            gradient_step: self.gradient_step,
            max_evals: self.max_evals,
            gradient: self.gradient,
            threads: self.threads,
            output: self.output,
        };
        RunConfig::resolve(&file, &flags)
    }
}

const EXIT_POINT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn install_pool(threads: Option<usize>) -> Result<(), String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder.build_global().map_err(|e| e.to_string())
}

fn scan_bond_lengths(cfg: &RunConfig) -> Result<Vec<f64>, String> {
    if let Some(b) = &cfg.bond_lengths {
        return Ok(b.clone());
    }
    match &cfg.source {
        Source::Native(g) => Ok(g.default_bond_lengths()),
        Source::Fixtures { dir, label } => {
            let found = run::discover_fixtures(dir, label).map_err(|e| format!("{}: {e}", dir.display()))?;
            if found.is_empty() {
                Err(format!("no {label}_*.fcidump files in {}", dir.display()))
            } else {
                Ok(found)
            }
        }
    }
}

fn single_point(common: CommonArgs, bond: f64) -> ExitCode {
    let cfg = match common.resolve() {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    if !(bond.is_finite() && bond > 0.0) {
        return usage_error(format!("bond length must be positive, got {bond}"));
    }
    if let Err(e) = install_pool(cfg.threads) {
        return usage_error(e);
    }
    let record = run::run_single(&cfg.source, bond, &cfg.pipeline);
    print!("{}", run::render_point(cfg.source.label(), &record, cfg.pipeline.reduce_two_qubits));
    if record.outcome.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_POINT_FAILED)
    }
}

fn scan(common: CommonArgs) -> ExitCode {
    let cfg = match common.resolve() {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let bonds = match scan_bond_lengths(&cfg) {
        Ok(b) => b,
        Err(e) => return usage_error(e),
    };
    if let Err(e) = install_pool(cfg.threads) {
        return usage_error(e);
    }
    let records = run::run_scan(&cfg.source, &bonds, &cfg.pipeline);
    let written = match &cfg.output {
        Some(path) => std::fs::File::create(path)
            .map_err(|e| format!("{}: {e}", path.display()))
            .and_then(|f| run::write_csv(f, &records).map_err(|e| e.to_string())),
        None => run::write_csv(std::io::stdout().lock(), &records).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        return usage_error(e);
    }
    let failed = records.iter().filter(|r| r.outcome.is_err()).count();
    for r in records.iter().filter(|r| r.outcome.is_err()) {
        if let Err(e) = &r.outcome {
            eprintln!("point {:.4} failed: {e}", r.bond_length);
        }
    }
    eprintln!("{} of {} points succeeded", records.len() - failed, records.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_POINT_FAILED)
    }
}

fn report(files: &[PathBuf]) -> ExitCode {
    let mut rows = Vec::with_capacity(files.len());
    for f in files {
        match report::summarize_file(f) {
            Ok(r) => rows.push(r),
            Err(e) => return usage_error(e),
        }
    }
    print!("{}", report::render(&rows));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::SinglePoint { common, bond_length } => single_point(common, bond_length),
        Command::Scan { common } => scan(common),
        Command::Report { files } => report(&files),
    }
}
