use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BatchReport, HarnessError, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// One row per trial under a fixed header.
    Csv,
    /// One JSON object per line: the config, every trial, then a summary.
    Jsonl,
}

/// A CSV row. The column order is part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub trial: usize,
    pub seed: u64,
    pub outcome: String,
    pub wall_seconds: f64,
    pub conjugations: u64,
    pub nodes_expanded: u64,
    pub peak_set_size: u64,
    pub recovered_word_length: Option<usize>,
}

impl From<&TrialRecord> for CsvRow {
    fn from(r: &TrialRecord) -> Self {
        Self {
            trial: r.trial,
            seed: r.seed,
            outcome: r
                .outcome
                .map_or_else(|| "ERROR".to_string(), |o| o.to_string()),
            wall_seconds: r.wall_seconds,
            conjugations: r.conjugations,
            nodes_expanded: r.nodes_expanded,
            peak_set_size: r.peak_set_size,
            recovered_word_length: r.recovered_word_length(),
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum JsonLine<'a> {
    Config {
        engine_version: &'a str,
        config: &'a super::ExperimentConfig,
    },
    Trial(&'a TrialRecord),
    Summary {
        trials: usize,
        successes: usize,
        success_rate: f64,
        total_seconds: f64,
    },
}

pub fn emit_report(
    report: &BatchReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<(), HarnessError> {
    let file = File::create(path)?;
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(file);
            for r in &report.records {
                w.serialize(CsvRow::from(r))?;
            }
            w.flush()?;
        }
        ReportFormat::Jsonl => {
            let mut w = BufWriter::new(file);
            let mut line = |l: JsonLine<'_>| -> Result<(), HarnessError> {
                serde_json::to_writer(&mut w, &l)?;
                w.write_all(b"\n")?;
                Ok(())
            };
            line(JsonLine::Config {
                engine_version: &report.engine_version,
                config: &report.config,
            })?;
            for r in &report.records {
                line(JsonLine::Trial(r))?;
            }
            line(JsonLine::Summary {
                trials: report.records.len(),
                successes: report.successes,
                success_rate: report.success_rate,
                total_seconds: report.total_seconds,
            })?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn read_csv_records(path: impl AsRef<Path>) -> Result<Vec<CsvRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
