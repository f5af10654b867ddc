//! Command-line BER sweep runner: flag parsing, CSV results and SVG plots.

use std::io;
use std::path::PathBuf;

use sefdm_core::harness::run_point;
use sefdm_core::{BerRecord, SweepPoint};

pub mod args;
pub mod plot;
pub mod table;

pub use args::{parse_args, CliConfig, OutputFormat};
pub use plot::{emit_plot, render_plot};
pub use table::{emit_csv, read_csv, write_csv, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad or unknown flags; carries clap's formatted message.
    #[error("{0}")]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] sefdm_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("malformed CSV row {row}: {msg}")]
    Malformed { row: usize, msg: String },
}

/// Outcome of [`run`]: the points that finished, and those that did not.
#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<BerRecord>,
    pub failures: Vec<(SweepPoint, sefdm_core::Error)>,
}

/// Simulate every point, then write whatever finished. Progress goes to
/// stderr, one line per point.
pub fn run(cfg: &CliConfig) -> Result<Report, CliError> {
    let spec = &cfg.spec;
    let points = spec.points();
    let mut report = Report::default();
    for (i, point) in points.iter().enumerate() {
        match run_point(spec, point) {
            Ok(rec) => {
                eprintln!(
                    "[{}/{}] alpha {} {} dB: {} errors in {} bits, ber {:.3e} ({:.1} s)",
                    i + 1,
                    points.len(),
                    point.alpha,
                    point.ebn0_db,
                    rec.bit_errors,
                    rec.bits_total,
                    rec.ber,
                    rec.wall_time_s
                );
                report.records.push(rec);
            }
            Err(e) => {
                eprintln!("[{}/{}] alpha {} {} dB: {e}", i + 1, points.len(), point.alpha, point.ebn0_db);
                report.failures.push((*point, e));
            }
        }
    }
    if report.records.is_empty() {
        return Ok(report);
    }
    if let Some(path) = cfg.csv_path() {
        emit_csv(&report.records, &path)?;
    }
    if let Some(path) = cfg.svg_path() {
        emit_plot(&report.records, &path)?;
    }
    Ok(report)
}

fn create_parent(path: &std::path::Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        }),
        _ => Ok(()),
    }
}
