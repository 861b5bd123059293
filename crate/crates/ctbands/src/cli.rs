//! Command-line driver. Exit codes: 0 success, 2 configuration error,
//! 3 computation refused or a verification check failed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctbands_core::models::{band_grid, bilayer_lattice, rice_mele_lattice, BilayerSpec, RiceMeleSpec};
use ctbands_core::spectra::{exceptional_scan, solve_lattice};
use ctbands_core::verify::{verify, DosCheck};
use ctbands_core::BipartiteLattice;

use crate::formats::{
    lattice_from_json, lattice_to_json, write_band_csv, write_dos_csv, DosMetadata, ScanDocument, SpectrumDocument,
    VerifyDocument,
};
use crate::parallel::{dos_histogram_parallel, thread_count};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "ctbands", version, about = "Spectra of CT-symmetric non-Hermitian bipartite lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bilayer band table on the N x N momentum grid (CSV).
    Bands(BandsArgs),
    /// Bilayer density of states by box counting (CSV plus JSON sidecar).
    Dos(DosArgs),
    /// Count broken channels over a range of gamma.
    Scan(ScanArgs),
    /// Full real-space spectrum (JSON).
    Spectrum(SpectrumArgs),
    /// Run the invariant checks and report pass/fail (JSON).
    Verify(VerifyArgs),
    /// Write the coupling block of a model as lattice JSON.
    ExportLattice(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    RiceMele,
    Bilayer,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Cells (rice-mele), sites per side (bilayer) or grid size M (dos).
    #[arg(short = 'N', long = "size")]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(short = 'J', long = "hop-j", default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,
    #[arg(short = 'T', long = "hop-t", allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Lattice JSON for `--model custom`.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Emit both sectors instead of only `+`.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct DosArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma_from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_to: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Include eigenvectors.
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Grid size of the DOS normalization check (bilayer only).
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    #[arg(long, default_value_t = 64)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return 2;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Bands(a) => run_bands(a),
        Command::Dos(a) => run_dos(a),
        Command::Scan(a) => run_scan(a),
        Command::Spectrum(a) => run_spectrum(a),
        Command::Verify(a) => run_verify(a),
        Command::ExportLattice(a) => {
            require_format(&a.out, Format::Json, &[Format::Json])?;
            let (lattice, _) = build_lattice(&a.model)?;
            let mut text = lattice_to_json(&lattice);
            text.push('\n');
            emit(&a.out, text.as_bytes())
        }
    }
}

fn run_bands(a: &BandsArgs) -> Result<(), CliError> {
    require_format(&a.out, Format::Csv, &[Format::Csv])?;
    let spec = bilayer_spec(&a.model)?;
    let grid = band_grid(&spec)?;
    let mut buf = Vec::new();
    write_band_csv(&mut buf, &grid, a.full)?;
    emit(&a.out, &buf)
}

fn run_dos(a: &DosArgs) -> Result<(), CliError> {
    require_format(&a.out, Format::Csv, &[Format::Csv])?;
    check_finite(&a.model)?;
    if a.model.model != ModelKind::Bilayer {
        return Err(CliError::Config("dos requires --model bilayer".into()));
    }
    let m = a.model.n.ok_or_else(|| CliError::Config("dos requires -N (grid size M)".into()))?;
    let t = a.model.t.ok_or_else(|| CliError::Config("dos requires -T".into()))?;
    let spec = BilayerSpec::new(2, a.model.j, t, a.model.gamma);
    warn_regime(&spec);
    let hist = dos_histogram_parallel(&spec, m, a.bins, thread_count()?)?;
    let mut buf = Vec::new();
    write_dos_csv(&mut buf, &hist)?;
    emit(&a.out, &buf)?;
    let meta = serde_json::to_string_pretty(&DosMetadata::new(&hist)).expect("plain data serializes") + "\n";
    match &a.out.output {
        Some(path) => write_file(&sidecar_path(path), meta.as_bytes()),
        None => {
            eprint!("{meta}");
            Ok(())
        }
    }
}

fn run_scan(a: &ScanArgs) -> Result<(), CliError> {
    let format = require_format(&a.out, Format::Json, &[Format::Json, Format::Csv])?;
    if !(a.gamma_from.is_finite() && a.gamma_to.is_finite()) {
        return Err(CliError::Config("gamma range must be finite".into()));
    }
    if a.steps == 0 {
        return Err(CliError::Config("--steps must be at least 1".into()));
    }
    let (lattice, _) = build_lattice(&a.model)?;
    let gammas = gamma_range(a.gamma_from, a.gamma_to, a.steps);
    let report = exceptional_scan(&lattice, &gammas)?;
    let buf = match format {
        Format::Json => json_bytes(&ScanDocument::new(&report)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["gamma", "fully_real", "broken_channels"]).map_err(csv_err)?;
            for r in &report.rows {
                w.write_record([r.gamma.to_string(), r.fully_real.to_string(), r.broken_channels.to_string()])
                    .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| CliError::Config(e.to_string()))?
        }
    };
    emit(&a.out, &buf)
}

fn run_spectrum(a: &SpectrumArgs) -> Result<(), CliError> {
    require_format(&a.out, Format::Json, &[Format::Json])?;
    let (lattice, _) = build_lattice(&a.model)?;
    let report = solve_lattice(&lattice, a.model.gamma)?;
    emit(&a.out, &json_bytes(&SpectrumDocument::new(&report, a.vectors)))
}

fn run_verify(a: &VerifyArgs) -> Result<(), CliError> {
    require_format(&a.out, Format::Json, &[Format::Json])?;
    let (lattice, spec) = build_lattice(&a.model)?;
    let dos = spec.map(|spec| DosCheck {
        spec,
        grid: a.grid,
        bins: a.bins,
    });
    let report = verify(&lattice, a.model.gamma, dos)?;
    emit(&a.out, &json_bytes(&VerifyDocument::new(&report)))?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == ctbands_core::verify::CheckStatus::Fail)
            .map(|c| c.name)
            .collect();
        Err(CliError::Compute(format!("verification failed: {}", failed.join(", "))))
    }
}

fn check_finite(m: &ModelArgs) -> Result<(), CliError> {
    let values = [Some(m.j), Some(m.gamma), m.t, m.delta];
    if values.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Config("numeric parameters must be finite".into()))
    }
}

fn bilayer_spec(m: &ModelArgs) -> Result<BilayerSpec, CliError> {
    check_finite(m)?;
    if m.model != ModelKind::Bilayer {
        return Err(CliError::Config("this command requires --model bilayer".into()));
    }
    let n = m.n.ok_or_else(|| CliError::Config("bilayer requires -N".into()))?;
    let t = m.t.ok_or_else(|| CliError::Config("bilayer requires -T".into()))?;
    let spec = BilayerSpec::new(n, m.j, t, m.gamma);
    warn_regime(&spec);
    Ok(spec)
}

/// Builds the coupling block for the selected model. The bilayer spec is
/// returned too so callers can run band-level checks.
pub fn build_lattice(m: &ModelArgs) -> Result<(BipartiteLattice, Option<BilayerSpec>), CliError> {
    check_finite(m)?;
    match m.model {
        ModelKind::RiceMele => {
            let n = m.n.ok_or_else(|| CliError::Config("rice-mele requires -N".into()))?;
            let delta = m.delta.ok_or_else(|| CliError::Config("rice-mele requires --delta".into()))?;
            let spec = RiceMeleSpec::new(n, delta);
            if !spec.in_standard_regime() {
                eprintln!("warning: |delta| >= 1 lies outside the standard dimerized regime");
            }
            Ok((rice_mele_lattice(&spec)?, None))
        }
        ModelKind::Bilayer => {
            let spec = bilayer_spec(m)?;
            Ok((bilayer_lattice(&spec)?, Some(spec)))
        }
        ModelKind::Custom => {
            let path = m.lattice.as_ref().ok_or_else(|| CliError::Config("custom requires --lattice".into()))?;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            Ok((lattice_from_json(&text)?, None))
        }
    }
}

fn warn_regime(spec: &BilayerSpec) {
    if !spec.in_valley_regime() {
        eprintln!("warning: T <= 4J; valley results do not apply");
    }
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn gamma_range(from: f64, to: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![from];
    }
    let last = (steps - 1) as f64;
    (0..steps).map(|i| from + (to - from) * (i as f64 / last)).collect()
}

/// Sidecar path for the DOS metadata: `out.json` next to `out.csv`, or
/// `out.meta.json` when the table itself ends in `.json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    if output.extension().is_some_and(|e| e == "json") {
        output.with_extension("meta.json")
    } else {
        output.with_extension("json")
    }
}

fn require_format(out: &OutputArgs, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = out.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Config(format!("format {f:?} is not supported by this command").to_lowercase()))
    }
}

fn json_bytes<S: serde::Serialize>(value: &S) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("plain data serializes");
    v.push(b'\n');
    v
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn emit(out: &OutputArgs, bytes: &[u8]) -> Result<(), CliError> {
    match &out.output {
        Some(path) => write_file(path, bytes),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::Config(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}
