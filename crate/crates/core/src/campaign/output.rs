use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{join, CampaignResult, Fault, Summary};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 15] = [
    "code_class",
    "d_z",
    "d_x",
    "arch",
    "root_qubit",
    "erasure_set",
    "phys_error_rate",
    "peak_prob",
    "time_bin",
    "shots",
    "logical_errors",
    "rate",
    "ci_low",
    "ci_high",
    "seed",
];

/// One results-file row. `erasure_set` lists erased nodes separated by `;`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub code_class: String,
    pub d_z: usize,
    pub d_x: usize,
    pub arch: String,
    pub root_qubit: Option<usize>,
    pub erasure_set: String,
    pub phys_error_rate: f64,
    pub peak_prob: f64,
    pub time_bin: usize,
    pub shots: usize,
    pub logical_errors: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl From<&CampaignResult> for CsvRow {
    fn from(r: &CampaignResult) -> Self {
        let p = &r.point;
        let erased = match &p.fault {
            Fault::NodeErasure { nodes } => nodes.clone(),
            _ => r.erased_nodes.clone(),
        };
        Self {
            code_class: p.code.class.as_str().to_string(),
            d_z: p.code.d_z,
            d_x: p.code.d_x,
            arch: p.arch.to_string(),
            root_qubit: p.fault.root(),
            erasure_set: join(&erased, ";"),
            phys_error_rate: p.phys_error_rate,
            peak_prob: p.peak_prob,
            time_bin: p.time_bin,
            shots: r.rate.shots,
            logical_errors: r.rate.errors,
            rate: r.rate.rate,
            ci_low: r.rate.ci_low,
            ci_high: r.rate.ci_high,
            seed: p.seed,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes one row per result, header first.
pub fn write_csv<W: Write>(out: W, results: &[CampaignResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        w.serialize(CsvRow::from(r)).map_err(csv_err)?;
    }
    if results.is_empty() {
        w.write_record(CSV_HEADER).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a results file, rejecting any header other than [`CSV_HEADER`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Io(format!("unexpected CSV header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

pub fn write_summary_csv<W: Write>(out: W, summaries: &[Summary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["code_class", "d_z", "d_x", "arch", "group", "median_rate", "points"]).map_err(csv_err)?;
    for s in summaries {
        w.write_record([
            s.code.class.as_str().to_string(),
            s.code.d_z.to_string(),
            s.code.d_x.to_string(),
            s.arch.clone(),
            s.key.clone(),
            s.median.to_string(),
            s.count.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Run manifest, serialised as TOML. Holds no wall-clock data so identical
/// runs produce identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub engine_version: String,
    pub master_seed: u64,
    pub sweep: String,
    pub points: usize,
    pub files: Vec<String>,
    pub config: BTreeMap<String, String>,
}

impl Manifest {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Io(e.to_string()))
    }
}
