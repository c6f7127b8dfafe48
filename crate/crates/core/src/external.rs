//! Ingestion of externally computed score files, so models that run
//! elsewhere (classic ML, neural nets, transformers) can join the ensemble
//! without in-process inference.
//!
//! Format: CSV with header `model_id,family,segment_index,score`, one row
//! per segment per model, indices exactly `0..N-1` per model.

use crate::model::{ModelDescriptor, ModelFamily, SentimentSeries};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("failed to read scores file: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("expected header model_id,family,segment_index,score")]
    BadHeader,
    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },
    #[error("model `{model}` is missing segment index {index}")]
    MissingIndex { model: String, index: usize },
    #[error("model `{model}` has duplicate segment index {index}")]
    DuplicateIndex { model: String, index: usize },
    #[error("model `{model}` has a non-finite score at index {index}")]
    NonFiniteScore { model: String, index: usize },
    #[error("model `{model}` has {got} scores but the corpus has {expected} segments")]
    LengthMismatch {
        model: String,
        got: usize,
        expected: usize,
    },
    #[error("model `{model}` declares conflicting families")]
    ConflictingFamily { model: String },
    #[error("scores file contains no rows")]
    Empty,
}

/// Reads an external scores CSV into one series per distinct model.
///
/// When `expected_len` is given, every model must provide exactly that many
/// scores. Models are returned in `model_id` order.
pub fn ingest_external_scores(
    path: impl AsRef<Path>,
    expected_len: Option<usize>,
) -> Result<Vec<SentimentSeries>, ExternalError> {
    let contents = std::fs::read_to_string(path)?;
    parse_scores_csv(&contents, expected_len)
}

pub fn parse_scores_csv(
    contents: &str,
    expected_len: Option<usize>,
) -> Result<Vec<SentimentSeries>, ExternalError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(contents.as_bytes());
    {
        let headers = reader.headers()?;
        let expected = ["model_id", "family", "segment_index", "score"];
        if headers.len() != 4 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(ExternalError::BadHeader);
        }
    }

    struct Pending {
        family: ModelFamily,
        rows: Vec<(usize, f64)>,
    }
    let mut by_model: BTreeMap<String, Pending> = BTreeMap::new();

    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header
        let record = record?;
        let bad = |message: String| ExternalError::BadRow { row, message };
        let model_id = record
            .get(0)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| bad("missing model_id".into()))?
            .to_string();
        let family: ModelFamily = record
            .get(1)
            .unwrap_or("")
            .parse()
            .map_err(|e: String| bad(e))?;
        let index: usize = record
            .get(2)
            .unwrap_or("")
            .parse()
            .map_err(|e| bad(format!("bad segment_index: {e}")))?;
        let score: f64 = record
            .get(3)
            .unwrap_or("")
            .parse()
            .map_err(|e| bad(format!("bad score: {e}")))?;
        if !score.is_finite() {
            return Err(ExternalError::NonFiniteScore {
                model: model_id,
                index,
            });
        }
        let entry = by_model.entry(model_id.clone()).or_insert(Pending {
            family,
            rows: Vec::new(),
        });
        if entry.family != family {
            return Err(ExternalError::ConflictingFamily { model: model_id });
        }
        entry.rows.push((index, score));
    }

    if by_model.is_empty() {
        return Err(ExternalError::Empty);
    }

    let mut out = Vec::with_capacity(by_model.len());
    for (model_id, mut pending) in by_model {
        pending.rows.sort_by_key(|&(i, _)| i);
        let n = pending.rows.len();
        if let Some(expected) = expected_len {
            if n != expected {
                return Err(ExternalError::LengthMismatch {
                    model: model_id,
                    got: n,
                    expected,
                });
            }
        }
        let mut values = Vec::with_capacity(n);
        for (want, &(got, score)) in pending.rows.iter().enumerate() {
            if got == want {
                values.push(score);
            } else if got > want {
                return Err(ExternalError::MissingIndex {
                    model: model_id,
                    index: want,
                });
            } else {
                return Err(ExternalError::DuplicateIndex {
                    model: model_id,
                    index: got,
                });
            }
        }
        out.push(SentimentSeries {
            model: ModelDescriptor::new(model_id, pending.family),
            corpus_id: String::new(),
            values,
        });
    }
    Ok(out)
}

/// Serializes series to the same CSV accepted by
/// [`ingest_external_scores`]. Floats print in shortest round-trip form, so
/// ingest followed by re-serialization is value-identical.
pub fn write_scores_csv<W: Write>(series: &[SentimentSeries], mut w: W) -> std::io::Result<()> {
    writeln!(w, "model_id,family,segment_index,score")?;
    for s in series {
        for (i, v) in s.values.iter().enumerate() {
            writeln!(w, "{},{},{},{}", s.model.model_id, s.model.family, i, v)?;
        }
    }
    Ok(())
}

pub fn scores_csv_string(series: &[SentimentSeries]) -> String {
    let mut buf = Vec::new();
    write_scores_csv(series, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
