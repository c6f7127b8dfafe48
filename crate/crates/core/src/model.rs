//! Model identity and raw per-segment score series.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Family a scoring model belongs to, used for family-level aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelFamily {
    Lexical,
    Heuristic,
    Ml,
    Dnn,
    Transformer,
    External,
    /// Reserved for the ensemble-median pseudo-model; never accepted from
    /// external score files.
    Ensemble,
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelFamily::Lexical => "lexical",
            ModelFamily::Heuristic => "heuristic",
            ModelFamily::Ml => "ml",
            ModelFamily::Dnn => "dnn",
            ModelFamily::Transformer => "transformer",
            ModelFamily::External => "external",
            ModelFamily::Ensemble => "ensemble",
        };
        f.write_str(s)
    }
}

impl FromStr for ModelFamily {
    type Err = String;

    /// Parses the families a score file may declare. `ensemble` is internal
    /// and deliberately rejected here.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lexical" => Ok(ModelFamily::Lexical),
            "heuristic" => Ok(ModelFamily::Heuristic),
            "ml" => Ok(ModelFamily::Ml),
            "dnn" => Ok(ModelFamily::Dnn),
            "transformer" => Ok(ModelFamily::Transformer),
            "external" => Ok(ModelFamily::External),
            other => Err(format!("unknown model family `{other}`")),
        }
    }
}

/// Identity of one scoring model within a run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub model_id: String,
    pub family: ModelFamily,
}

impl ModelDescriptor {
    pub fn new(model_id: impl Into<String>, family: ModelFamily) -> Self {
        Self {
            model_id: model_id.into(),
            family,
        }
    }
}

/// Raw scores from one model on one corpus, one value per segment in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentSeries {
    pub model: ModelDescriptor,
    pub corpus_id: String,
    pub values: Vec<f64>,
}

impl SentimentSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when every value equals the first; such series carry no signal
    /// and cannot be standardized.
    pub fn is_constant(&self) -> bool {
        match self.values.first() {
            Some(&v0) => self.values.iter().all(|&v| v == v0),
            None => true,
        }
    }
}
