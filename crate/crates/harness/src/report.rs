//! Report emission: one CSV row or JSON object per experiment.

use crate::experiment::ExperimentReport;
use serde::Deserialize;
use std::io::{self, Write};
use std::path::Path;
use thiserror::Error;

/// Fixed CSV column order.
pub const CSV_HEADER: &str =
    "env,eta,n_mc,replications,seed,accuracy,mean_iterations,stddev_iterations,nonconverged,wall_time_s";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no reports to emit")]
    Empty,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Write reports to an arbitrary writer.
pub fn write_reports<W: Write>(
    reports: &[ExperimentReport],
    format: ReportFormat,
    out: &mut W,
) -> Result<(), ReportError> {
    if reports.is_empty() {
        return Err(ReportError::Empty);
    }
    match format {
        ReportFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.env,
                    r.eta,
                    r.n_mc,
                    r.replications,
                    r.seed,
                    r.accuracy,
                    r.mean_iterations,
                    r.stddev_iterations,
                    r.nonconverged,
                    r.wall_time_s
                )?;
            }
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Emit to a file, or to stdout when no destination is given.
pub fn emit_report(
    reports: &[ExperimentReport],
    format: ReportFormat,
    destination: Option<&Path>,
) -> Result<(), ReportError> {
    match destination {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            write_reports(reports, format, &mut file)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_reports(reports, format, &mut lock)
        }
    }
}

/// Parse reports back from emitted JSON.
pub fn parse_json_reports(data: &str) -> Result<Vec<ExperimentReport>, ReportError> {
    let mut de = serde_json::Deserializer::from_str(data);
    Ok(Vec::<ExperimentReport>::deserialize(&mut de)?)
}

/// Render reports to a CSV string with the wall-time column removed, for
/// comparisons that must ignore timing.
pub fn csv_without_wall_time(reports: &[ExperimentReport]) -> Result<String, ReportError> {
    let mut buf = Vec::new();
    write_reports(reports, ReportFormat::Csv, &mut buf)?;
    let text = String::from_utf8(buf).expect("csv is utf-8");
    Ok(text
        .lines()
        .map(|line| match line.rfind(',') {
            Some(idx) => &line[..idx],
            None => line,
        })
        .collect::<Vec<_>>()
        .join("\n"))
}
