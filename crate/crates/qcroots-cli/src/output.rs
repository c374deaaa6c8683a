//! CSV files with a JSON sidecar describing the run that produced them.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

pub const FORMAT_VERSION: u32 = 1;

/// Everything that determines a run. Unused fields are left out of the JSON.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub max_m: Option<u64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    pub n: u64,
    pub nu: u64,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q_cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<BinSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BinSpec {
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

#[derive(Serialize)]
struct Sidecar<'a, R: Serialize> {
    format_version: u32,
    config: &'a RunConfig,
    results: &'a R,
}

/// `results.csv` → `results.csv.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes the rows as CSV to `out` with the metadata beside it. Without an
/// output path the rows go to stdout and the metadata is dropped.
pub fn write_csv<T: Serialize, R: Serialize>(
    config: &RunConfig,
    rows: &[T],
    header: &[&str],
    results: &R,
) -> io::Result<()> {
    match &config.out {
        Some(path) => {
            write_rows(File::create(path)?, rows, header)?;
            write_json(&sidecar_path(path), config, results)
        }
        None => write_rows(io::stdout().lock(), rows, header),
    }
}

fn write_rows<W: Write, T: Serialize>(w: W, rows: &[T], header: &[&str]) -> io::Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(header)?;
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()
}

pub fn write_json<R: Serialize>(path: &Path, config: &RunConfig, results: &R) -> io::Result<()> {
    let sidecar = Sidecar { format_version: FORMAT_VERSION, config, results };
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, &sidecar)?;
    writeln!(f)
}

/// Prints a JSON document to stdout.
pub fn print_json<R: Serialize>(value: &R) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}
