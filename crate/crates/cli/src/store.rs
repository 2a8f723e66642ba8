//! Run-directory artifacts shared between commands.
//!
//! ```text
//! documents.jsonl   one CEO document per line (ingest)
//! labels.csv        MBTI vectors per CEO (labels)
//! split.csv         call_id,ceo,part (split)
//! model/model.json  versioned model file (train)
//! predictions.csv   call_id,ceo,ei,sn,tf,jp (predict)
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use persona_core::corpus::{normalize_name, CeoDocument};
use persona_core::labels::{read_labels_csv, MbtiVector};
use persona_core::model::{Candidate, CandidateScore, EvalReport, EvalSpace, Part, PersonalityModel};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult, WithPath};

pub const MODEL_FORMAT: &str = "persona-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocRecord {
    pub company: String,
    #[serde(flatten)]
    pub doc: CeoDocument,
}

pub fn documents_path(cfg: &RunConfig) -> PathBuf {
    cfg.run_dir.join("documents.jsonl")
}

pub fn labels_path(cfg: &RunConfig) -> PathBuf {
    cfg.run_dir.join("labels.csv")
}

pub fn split_path(cfg: &RunConfig) -> PathBuf {
    cfg.run_dir.join("split.csv")
}

pub fn model_path(cfg: &RunConfig) -> PathBuf {
    cfg.model_dir().join("model.json")
}

pub fn predictions_path(cfg: &RunConfig) -> PathBuf {
    cfg.run_dir.join("predictions.csv")
}

fn require(path: &Path, producer: &str) -> CliResult<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::missing_artifact(path, producer))
    }
}

pub fn read_documents(cfg: &RunConfig) -> CliResult<Vec<DocRecord>> {
    let path = documents_path(cfg);
    require(&path, "ingest")?;
    let file = fs::File::open(&path).at(&path)?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.at(&path)?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(serde_json::from_str(&line).at(&path)?);
    }
    Ok(out)
}

/// Labels keyed by normalized CEO name.
pub fn read_labels(cfg: &RunConfig) -> CliResult<BTreeMap<String, MbtiVector>> {
    let path = labels_path(cfg);
    require(&path, "labels")?;
    let rows = read_labels_csv(fs::File::open(&path).at(&path)?).at(&path)?;
    let mut out = BTreeMap::new();
    for (id, m) in rows {
        out.insert(normalize_name(&id).at(&path)?, m);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRow {
    pub call_id: String,
    pub ceo: String,
    pub part: Part,
}

pub fn read_split(cfg: &RunConfig) -> CliResult<Vec<SplitRow>> {
    let path = split_path(cfg);
    require(&path, "split")?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(&path).at(&path)?;
    rdr.deserialize().map(|r| r.at(&path)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub call_id: String,
    pub ceo: String,
    pub ei: f64,
    pub sn: f64,
    pub tf: f64,
    pub jp: f64,
}

pub fn read_predictions(cfg: &RunConfig) -> CliResult<Vec<PredictionRow>> {
    let path = predictions_path(cfg);
    require(&path, "predict")?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(&path).at(&path)?;
    rdr.deserialize().map(|r| r.at(&path)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub space: EvalSpace,
    /// Validation outcome of every candidate, in candidate order.
    pub validation: Vec<ValidationEntry>,
    pub selected: usize,
    pub model: PersonalityModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationEntry {
    pub candidate: Candidate,
    pub reports: Option<[EvalReport; 4]>,
    pub error: Option<String>,
}

impl From<&CandidateScore> for ValidationEntry {
    fn from(s: &CandidateScore) -> Self {
        ValidationEntry { candidate: s.candidate, reports: s.reports, error: s.error.clone() }
    }
}

pub fn read_model(cfg: &RunConfig) -> CliResult<ModelFile> {
    let path = model_path(cfg);
    require(&path, "train")?;
    let text = fs::read_to_string(&path).at(&path)?;
    let head: serde_json::Value = serde_json::from_str(&text).at(&path)?;
    if head.get("format").and_then(|v| v.as_str()) != Some(MODEL_FORMAT) {
        return Err(CliError::validation(format!("{}: not a {MODEL_FORMAT} file", path.display())));
    }
    match head.get("version").and_then(|v| v.as_u64()) {
        Some(v) if v == MODEL_VERSION as u64 => {}
        other => {
            return Err(CliError::validation(format!(
                "{}: model file version {other:?} is not supported (expected {MODEL_VERSION})",
                path.display()
            )))
        }
    }
    serde_json::from_value(head).at(&path)
}

/// CSV body from serializable rows.
pub fn csv_rows<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
