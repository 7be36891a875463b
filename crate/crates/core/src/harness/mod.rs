//! Batch experiments: many independent protocol instances, one attack per
//! instance, aggregated into a report.
//!
//! Trial `i` draws its instance from `ChaCha8(trial_seed(master, i))`, so the
//! per-trial outcomes do not depend on the number of workers.

mod report;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aag::{random_element, run_protocol, AagError, ProtocolParams};
use crate::attacks::{run_attack, verify_candidate, AttackOptions, Outcome, Recovered, Variant};
use crate::numberfield::{build_semidirect_presentation, NumberFieldError, QuadraticFieldData};
use crate::rng::{rng_from_seed, trial_seed, Rng};
use crate::{Group, GroupError, Int, PcPresentation, PresentationError};

pub use report::{emit_report, read_csv_records, ReportFormat};

pub const ENGINE_VERSION: &str = concat!("pcaag-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    NumberField(#[from] NumberFieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Aag(#[from] AagError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Where the platform group comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSource {
    /// Degree 1 or real quadratic polynomial, built directly.
    Polynomial(String),
    /// Presentation file in the JSON format.
    File(PathBuf),
}

impl GroupSource {
    pub fn presentation(&self) -> Result<PcPresentation, HarnessError> {
        match self {
            GroupSource::Polynomial(text) => {
                let f = text.parse()?;
                let data = QuadraticFieldData::from_polynomial(&f)?;
                Ok(build_semidirect_presentation(&data)?)
            }
            GroupSource::File(path) => Ok(PcPresentation::load(path)?),
        }
    }

    /// Builds the group, including the consistency check.
    pub fn load(&self) -> Result<Group, HarnessError> {
        Ok(Group::new(self.presentation()?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub group_source: GroupSource,
    pub protocol: ProtocolParams,
    pub variant: Variant,
    pub options: AttackOptions,
    pub timeout_seconds: f64,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        self.protocol.validate()?;
        if self.trials == 0 {
            return Err(HarnessError::InvalidConfig("trials must be at least 1".into()));
        }
        if self.timeout_seconds.is_nan() || self.timeout_seconds <= 0.0 {
            return Err(HarnessError::InvalidConfig("timeout must be positive".into()));
        }
        if self.variant.uses_memory() && self.options.memory == 0 {
            return Err(HarnessError::InvalidConfig(
                "memory size must be at least 1".into(),
            ));
        }
        if self.workers == 0 {
            return Err(HarnessError::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_seconds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// `None` when the trial could not be set up; see `error`.
    pub outcome: Option<Outcome>,
    pub wall_seconds: f64,
    pub conjugations: u64,
    pub nodes_expanded: u64,
    pub peak_set_size: u64,
    pub recovered: Option<Recovered>,
    /// Independent re-check of a recovered key against the public data.
    pub verified: Option<bool>,
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn is_success(&self) -> bool {
        self.outcome == Some(Outcome::Success)
    }

    pub fn recovered_word_length(&self) -> Option<usize> {
        self.recovered.as_ref().map(|r| r.word.len())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub config: ExperimentConfig,
    pub engine_version: String,
    pub records: Vec<TrialRecord>,
    pub successes: usize,
    pub success_rate: f64,
    pub total_seconds: f64,
}

impl BatchReport {
    pub fn outcomes(&self) -> Vec<Option<Outcome>> {
        self.records.iter().map(|r| r.outcome).collect()
    }

    /// Successful trials whose recovered key failed the independent check.
    pub fn soundness_violations(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.is_success() && r.verified != Some(true))
            .count()
    }
}

/// Loads the configured group and runs the batch.
pub fn run_batch(cfg: &ExperimentConfig) -> Result<BatchReport, HarnessError> {
    cfg.validate()?;
    let group = cfg.group_source.load()?;
    run_batch_on(&group, cfg)
}

/// Runs the batch on an already built group. Setup failures of single
/// trials are recorded in their records.
pub fn run_batch_on(group: &Group, cfg: &ExperimentConfig) -> Result<BatchReport, HarnessError> {
    cfg.validate()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial(group, cfg, i))
            .collect()
    });
    let successes = records.iter().filter(|r| r.is_success()).count();
    Ok(BatchReport {
        config: cfg.clone(),
        engine_version: ENGINE_VERSION.to_string(),
        successes,
        success_rate: successes as f64 / records.len() as f64,
        records,
        total_seconds: started.elapsed().as_secs_f64(),
    })
}

fn run_trial(group: &Group, cfg: &ExperimentConfig, trial: usize) -> TrialRecord {
    let seed = trial_seed(cfg.seed, trial as u64);
    let started = Instant::now();
    let inst = match run_protocol(group, &cfg.protocol, &mut rng_from_seed(seed)) {
        Ok(inst) => inst,
        Err(e) => {
            return TrialRecord {
                trial,
                seed,
                outcome: None,
                wall_seconds: started.elapsed().as_secs_f64(),
                conjugations: 0,
                nodes_expanded: 0,
                peak_set_size: 0,
                recovered: None,
                verified: None,
                error: Some(e.to_string()),
            }
        }
    };
    let view = inst.public_view();
    let result = run_attack(cfg.variant, group, &view, cfg.timeout(), &cfg.options);
    let verified = result
        .recovered
        .as_ref()
        .map(|r| verify_candidate(group, &view, &r.element));
    TrialRecord {
        trial,
        seed,
        outcome: Some(result.outcome),
        wall_seconds: result.stats.wall_seconds,
        conjugations: result.stats.conjugations,
        nodes_expanded: result.stats.nodes_expanded,
        peak_set_size: result.stats.peak_set_size,
        recovered: result.recovered,
        verified,
        error: None,
    }
}

/// Sample statistics of `|b^a| - |b|` over independent random `a`, `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthGrowth {
    pub trials: usize,
    pub mean: f64,
    pub min: Int,
    pub max: Int,
    /// Mean length of the conjugators `a`.
    pub mean_conjugator_length: f64,
    pub differences: Vec<Int>,
}

pub fn length_growth_experiment(
    group: &Group,
    l1: u64,
    l2: u64,
    trials: usize,
    rng: &mut Rng,
) -> Result<LengthGrowth, AagError> {
    if trials == 0 {
        return Err(AagError::InvalidParameter("trials must be at least 1".into()));
    }
    let mut differences = Vec::with_capacity(trials);
    let mut conjugator_total = Int::ZERO;
    for _ in 0..trials {
        let a = random_element(group, l1, l2, rng)?;
        let b = random_element(group, l1, l2, rng)?;
        conjugator_total += a.length();
        differences.push(length_growth_sample(group, &a, &b));
    }
    let to_f64 = |x: &Int| x.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let total: Int = differences.iter().cloned().sum();
    Ok(LengthGrowth {
        trials,
        mean: to_f64(&total) / trials as f64,
        min: differences.iter().min().cloned().unwrap_or(Int::ZERO),
        max: differences.iter().max().cloned().unwrap_or(Int::ZERO),
        mean_conjugator_length: to_f64(&conjugator_total) / trials as f64,
        differences,
    })
}

/// `|b^a| - |b|`.
pub fn length_growth_sample(
    group: &Group,
    a: &crate::GroupElement,
    b: &crate::GroupElement,
) -> Int {
    group.conjugate(b, a).length() - b.length()
}
