//! Core library for building comparable sentiment arcs from long narrative
//! texts and ranking an ensemble of scoring models against its own median.
//!
//! The pipeline has two halves. The first turns raw text into per-segment
//! sentiment scores: [`prep`] normalizes and segments a document, [`lexicon`]
//! and [`score`] produce one [`SentimentSeries`] per model (built-in lexical
//! and rule-based scorers, plus externally computed scores via [`external`]).
//! The second half makes the series comparable: [`arc`] standardizes, smooths
//! and downsamples them into [`Arc`]s and derives the ensemble median,
//! [`dtw`] and [`cluster`] measure and group arc shapes, and [`metrics`]
//! scores every model against the median consensus.

pub mod arc;
pub mod cluster;
pub mod dtw;
pub mod external;
pub mod lexicon;
pub mod metrics;
pub mod model;
pub mod prep;
pub mod rules;
pub mod score;

mod porter;

pub use arc::{ensemble_median, smooth, standardize, Arc, ArcError, EnsembleArcs, Stage};
pub use arc::{downsample_lttb, DEFAULT_LTTB_THRESHOLD, DEFAULT_SMOOTHING_FRACTION};
pub use cluster::{hcluster, Dendrogram, Linkage, Merge};
pub use dtw::{distance_matrix, dtw_distance, CostKind, DistanceMatrix, DtwOptions, SimilarityError};
pub use external::{ingest_external_scores, write_scores_csv, ExternalError};
pub use lexicon::{load_lexicon, parse_lexicon, BundledLexicon, Lexicon, LexiconError};
pub use metrics::{ecc, mcc, metric_table, mfc, rank_models, MetricTable, MetricsError};
pub use model::{ModelDescriptor, ModelFamily, SentimentSeries};
pub use prep::{normalize_text, segment, tokenize, PrepOptions, RawDocument, Segment};
pub use rules::RuleSet;
pub use score::{score_corpus, score_heuristic, score_lexical, ScoreError, ScorerMode, ScorerSpec};
