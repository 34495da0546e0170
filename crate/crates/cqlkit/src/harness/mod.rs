//! Dataset I/O and batch evaluation.
//!
//! Datasets and predictions are JSONL files, one object per line:
//!
//! ```text
//! {"id": "r1", "nl": "...", "cql": "[word=\"book\"]", "class": "simple", "lang": "en"}
//! {"id": "r1", "pred": "[word='book']"}
//! ```
//!
//! Evaluation scores every (gold, prediction) pair and aggregates per class
//! and overall. With the `parallel` feature records are scored concurrently;
//! results are ordered by record id either way.

mod report;
mod stats;

pub use report::{format_pct, MetricReport, MetricRow};
pub use stats::{compute_stats, DatasetStats, StatRow};

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::corpus::CorpusIndex;
use crate::metrics::{score_record, MetricScore, MetricWeights, ScoreWarning};
use crate::syntax::{classify, parse, QueryClass};

/// One gold dataset record. The CQL is guaranteed to parse and to classify as
/// the declared class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub nl: String,
    pub cql: String,
    pub class: QueryClass,
    pub lang: String,
}

/// One model prediction, keyed to a dataset record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub pred: String,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    SchemaError { line: usize, message: String },
    #[error("line {line}: duplicate id '{id}'")]
    DuplicateId { line: usize, id: String },
    #[error("prediction id '{id}' does not reference any dataset record")]
    DanglingPredictionId { id: String },
    #[error("record '{id}' has no prediction")]
    MissingPrediction { id: String },
    #[error("{0}")]
    Io(String),
}

fn parse_dataset_line(line: &str, line_no: usize) -> Result<DatasetRecord, DatasetError> {
    let record: DatasetRecord =
        serde_json::from_str(line).map_err(|e| DatasetError::SchemaError {
            line: line_no,
            message: e.to_string(),
        })?;
    let query = parse(&record.cql).map_err(|e| DatasetError::SchemaError {
        line: line_no,
        message: format!("record '{}': cql does not parse: {e}", record.id),
    })?;
    let class = classify(&query);
    if class != record.class {
        return Err(DatasetError::SchemaError {
            line: line_no,
            message: format!(
                "record '{}': declared class {} but query classifies as {class}",
                record.id, record.class
            ),
        });
    }
    Ok(record)
}

/// Loads and validates a gold dataset: well-formed JSONL, parseable CQL,
/// matching class, unique ids.
pub fn load_dataset<R: BufRead>(reader: R) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut records = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DatasetError::Io(format!("line {line_no}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_dataset_line(&line, line_no)?;
        if !seen.insert(record.id.clone()) {
            return Err(DatasetError::DuplicateId {
                line: line_no,
                id: record.id,
            });
        }
        records.push(record);
    }
    Ok(records)
}

pub fn load_dataset_path(path: &Path) -> Result<Vec<DatasetRecord>, DatasetError> {
    let file =
        File::open(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    load_dataset(BufReader::new(file))
}

/// Lenient loader for statistics: skips records whose CQL does not parse (or
/// whose line is malformed) and counts them instead of failing. Duplicate ids
/// still fail.
pub fn load_dataset_lenient<R: BufRead>(
    reader: R,
) -> Result<(Vec<DatasetRecord>, usize), DatasetError> {
    let mut records = Vec::new();
    let mut skipped = 0;
    let mut seen: HashSet<String> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DatasetError::Io(format!("line {line_no}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_dataset_line(&line, line_no) {
            Ok(record) => {
                if !seen.insert(record.id.clone()) {
                    return Err(DatasetError::DuplicateId {
                        line: line_no,
                        id: record.id,
                    });
                }
                records.push(record);
            }
            Err(_) => skipped += 1,
        }
    }
    Ok((records, skipped))
}

pub fn load_dataset_lenient_path(path: &Path) -> Result<(Vec<DatasetRecord>, usize), DatasetError> {
    let file =
        File::open(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    load_dataset_lenient(BufReader::new(file))
}

/// Loads predictions and validates them against the gold records: unique ids,
/// no dangling references, full coverage.
pub fn load_predictions<R: BufRead>(
    reader: R,
    gold: &[DatasetRecord],
) -> Result<Vec<PredictionRecord>, DatasetError> {
    let gold_ids: HashSet<&str> = gold.iter().map(|r| r.id.as_str()).collect();
    let mut records = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DatasetError::Io(format!("line {line_no}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord =
            serde_json::from_str(&line).map_err(|e| DatasetError::SchemaError {
                line: line_no,
                message: e.to_string(),
            })?;
        if !gold_ids.contains(record.id.as_str()) {
            return Err(DatasetError::DanglingPredictionId { id: record.id });
        }
        if !seen.insert(record.id.clone()) {
            return Err(DatasetError::DuplicateId {
                line: line_no,
                id: record.id,
            });
        }
        records.push(record);
    }
    for record in gold {
        if !seen.contains(&record.id) {
            return Err(DatasetError::MissingPrediction {
                id: record.id.clone(),
            });
        }
    }
    Ok(records)
}

pub fn load_predictions_path(
    path: &Path,
    gold: &[DatasetRecord],
) -> Result<Vec<PredictionRecord>, DatasetError> {
    let file =
        File::open(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    load_predictions(BufReader::new(file), gold)
}

/// Outcome of scoring one record inside [`evaluate`].
enum RecordOutcome {
    Scored {
        class: QueryClass,
        score: MetricScore,
        warnings: Vec<ScoreWarning>,
    },
    Excluded {
        id: String,
        reason: String,
    },
}

/// Scores every (gold, prediction) pair and aggregates per class and overall.
/// Records whose gold side fails (parse or execution) are excluded from the
/// aggregates and reported with a reason; truncated-hit comparisons score 0
/// and are counted as warnings.
pub fn evaluate(
    gold: &[DatasetRecord],
    preds: &[PredictionRecord],
    corpus: Option<&CorpusIndex>,
    weights: MetricWeights,
    limit: usize,
) -> Result<MetricReport, DatasetError> {
    let by_id: HashMap<&str, &PredictionRecord> =
        preds.iter().map(|p| (p.id.as_str(), p)).collect();
    for p in preds {
        if !gold.iter().any(|g| g.id == p.id) {
            return Err(DatasetError::DanglingPredictionId { id: p.id.clone() });
        }
    }
    let pairs: Vec<(&DatasetRecord, &PredictionRecord)> = gold
        .iter()
        .map(|g| {
            by_id
                .get(g.id.as_str())
                .map(|p| (g, *p))
                .ok_or_else(|| DatasetError::MissingPrediction { id: g.id.clone() })
        })
        .collect::<Result<_, _>>()?;

    let score_one = |(g, p): &(&DatasetRecord, &PredictionRecord)| -> RecordOutcome {
        match score_record(&p.pred, &g.cql, corpus, weights, limit) {
            Ok((score, warnings)) => RecordOutcome::Scored {
                class: g.class,
                score,
                warnings,
            },
            Err(e) => RecordOutcome::Excluded {
                id: g.id.clone(),
                reason: e.to_string(),
            },
        }
    };

    #[cfg(feature = "parallel")]
    let outcomes: Vec<RecordOutcome> = pairs.par_iter().map(score_one).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<RecordOutcome> = pairs.iter().map(score_one).collect();

    let mut scored: Vec<(QueryClass, MetricScore)> = Vec::new();
    let mut excluded = Vec::new();
    let mut warning_count = 0;
    for outcome in outcomes {
        match outcome {
            RecordOutcome::Scored {
                class,
                score,
                warnings,
            } => {
                warning_count += warnings.len();
                scored.push((class, score));
            }
            RecordOutcome::Excluded { id, reason } => excluded.push((id, reason)),
        }
    }

    Ok(MetricReport::from_scores(
        &scored,
        excluded,
        warning_count,
        corpus.is_some(),
    ))
}
