//! Arc transforms: z-score standardization, centered moving-average
//! smoothing with shrinking end windows, largest-triangle-three-buckets
//! downsampling, and the pointwise ensemble median that serves as the
//! synthetic ground truth.

use crate::model::{ModelDescriptor, ModelFamily, SentimentSeries};
use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

pub const DEFAULT_SMOOTHING_FRACTION: f64 = 0.10;
pub const DEFAULT_LTTB_THRESHOLD: usize = 25;

/// Identifier used for the median pseudo-model in serialized artifacts.
pub const MEDIAN_MODEL_ID: &str = "ensemble_median";

#[derive(Debug, Error)]
pub enum ArcError {
    #[error("series is constant; standard deviation is zero")]
    ConstantSeries,
    #[error("series too short to standardize (need at least 2 values, got {0})")]
    TooShort(usize),
    #[error("downsample threshold must be at least 3 (got {0})")]
    ThresholdTooSmall(usize),
    #[error("downsample threshold {threshold} exceeds series length {len}")]
    ThresholdExceedsLength { threshold: usize, len: usize },
    #[error("arcs have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 arcs for an ensemble (got {0})")]
    TooFewArcs(usize),
    #[error("arc has no points")]
    EmptyArc,
}

/// Stage of an arc within the transform pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Standardized,
    Smoothed,
    Downsampled,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Standardized => "standardized",
            Stage::Smoothed => "smoothed",
            Stage::Downsampled => "downsampled",
        })
    }
}

/// A comparable sentiment time series: (x, y) points where x is the segment
/// position (original indices survive downsampling) and y the transformed
/// score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub model: ModelDescriptor,
    pub corpus_id: String,
    pub stage: Stage,
    pub points: Vec<(f64, f64)>,
}

impl Arc {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|&(_, y)| y).collect()
    }
}

/// Z-scores a raw series with population standard deviation, yielding a
/// standardized arc with x = 0..N-1.
pub fn standardize(series: &SentimentSeries) -> Result<Arc, ArcError> {
    let n = series.values.len();
    if n < 2 {
        return Err(ArcError::TooShort(n));
    }
    let mean = series.values.iter().sum::<f64>() / n as f64;
    let variance = series
        .values
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / n as f64;
    if variance == 0.0 {
        return Err(ArcError::ConstantSeries);
    }
    let sd = variance.sqrt();
    let points = series
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (i as f64, (v - mean) / sd))
        .collect();
    Ok(Arc {
        model: series.model.clone(),
        corpus_id: series.corpus_id.clone(),
        stage: Stage::Standardized,
        points,
    })
}

/// Window width for a smoothing fraction: round-half-away-from-zero of
/// `fraction * n`, at least 1.
pub fn smoothing_window(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64).round() as usize).max(1)
}

/// Centered simple moving average with window `max(1, round(fraction*N))`.
/// The window is clipped to the series at both ends, so output length
/// equals input length. Values carry over unchanged for a window of 1.
pub fn smooth(arc: &Arc, fraction: f64) -> Arc {
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "smoothing fraction must be in (0, 1]"
    );
    let n = arc.points.len();
    let w = smoothing_window(fraction, n);
    let half = w / 2;

    // prefix[i] = sum of y[..i]
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for &(_, y) in &arc.points {
        prefix.push(prefix.last().unwrap() + y);
    }

    let points = arc
        .points
        .iter()
        .enumerate()
        .map(|(i, &(x, _))| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            let mean = (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64;
            (x, mean)
        })
        .collect();

    Arc {
        model: arc.model.clone(),
        corpus_id: arc.corpus_id.clone(),
        stage: Stage::Smoothed,
        points,
    }
}

/// Largest-triangle-three-buckets downsampling to exactly `threshold`
/// points. The first and last points are always kept; the interior is split
/// into `threshold - 2` equal buckets and each bucket contributes the point
/// with the largest triangle area against the previously selected point and
/// the average of the next bucket. Equal areas resolve to the earliest
/// point.
pub fn downsample_lttb(arc: &Arc, threshold: usize) -> Result<Arc, ArcError> {
    let n = arc.points.len();
    if threshold < 3 {
        return Err(ArcError::ThresholdTooSmall(threshold));
    }
    if threshold > n {
        return Err(ArcError::ThresholdExceedsLength { threshold, len: n });
    }

    let data = &arc.points;
    let mut sampled = Vec::with_capacity(threshold);
    sampled.push(data[0]);

    let every = (n - 2) as f64 / (threshold - 2) as f64;
    let mut selected = 0usize;

    for bucket in 0..threshold - 2 {
        let range_start = (bucket as f64 * every).floor() as usize + 1;
        let range_end = (((bucket + 1) as f64 * every).floor() as usize + 1).min(n - 1);

        let avg_start = range_end;
        let avg_end = ((((bucket + 2) as f64) * every).floor() as usize + 1).min(n);
        let avg_len = avg_end.saturating_sub(avg_start).max(1);
        let (mut avg_x, mut avg_y) = (0.0, 0.0);
        for &(x, y) in &data[avg_start..avg_start + avg_len] {
            avg_x += x;
            avg_y += y;
        }
        avg_x /= avg_len as f64;
        avg_y /= avg_len as f64;

        let (ax, ay) = data[selected];
        let mut best_idx = range_start;
        let mut best_area = f64::NEG_INFINITY;
        for (j, &(x, y)) in data.iter().enumerate().take(range_end).skip(range_start) {
            let area = ((x - ax) * (avg_y - ay) - (avg_x - ax) * (y - ay)).abs();
            if area > best_area {
                best_area = area;
                best_idx = j;
            }
        }
        sampled.push(data[best_idx]);
        selected = best_idx;
    }

    sampled.push(data[n - 1]);
    Ok(Arc {
        model: arc.model.clone(),
        corpus_id: arc.corpus_id.clone(),
        stage: Stage::Downsampled,
        points: sampled,
    })
}

/// Pointwise median across arcs of equal stage and length; an even count
/// takes the mean of the two middle values.
pub fn ensemble_median(arcs: &[Arc]) -> Result<Arc, ArcError> {
    if arcs.len() < 2 {
        return Err(ArcError::TooFewArcs(arcs.len()));
    }
    let n = arcs[0].points.len();
    for arc in arcs {
        if arc.points.len() != n {
            return Err(ArcError::LengthMismatch(n, arc.points.len()));
        }
    }
    if n == 0 {
        return Err(ArcError::EmptyArc);
    }

    let mut points = Vec::with_capacity(n);
    let mut column = vec![0.0; arcs.len()];
    for i in 0..n {
        for (j, arc) in arcs.iter().enumerate() {
            column[j] = arc.points[i].1;
        }
        points.push((arcs[0].points[i].0, median_inplace(&mut column)));
    }

    Ok(Arc {
        model: ModelDescriptor::new(MEDIAN_MODEL_ID, ModelFamily::Ensemble),
        corpus_id: arcs[0].corpus_id.clone(),
        stage: arcs[0].stage,
        points,
    })
}

/// Median via selection rather than a full sort.
fn median_inplace(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (_, upper_mid, _) = values.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    let upper = *upper_mid;
    if n % 2 == 1 {
        upper
    } else {
        let lower = values[..mid]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (lower + upper) / 2.0
    }
}

/// All arcs for one corpus at a common stage, plus their median.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleArcs {
    pub corpus_id: String,
    pub arcs: Vec<Arc>,
    pub median: Arc,
}

impl EnsembleArcs {
    pub fn new(corpus_id: impl Into<String>, arcs: Vec<Arc>) -> Result<Self, ArcError> {
        let median = ensemble_median(&arcs)?;
        Ok(Self {
            corpus_id: corpus_id.into(),
            arcs,
            median,
        })
    }
}

/// Writes arcs as CSV rows `model_id,stage,x,y` (median included under its
/// pseudo-model id).
pub fn write_arcs_csv<W: Write>(arcs: &[&Arc], mut w: W) -> std::io::Result<()> {
    writeln!(w, "model_id,stage,x,y")?;
    for arc in arcs {
        for &(x, y) in &arc.points {
            writeln!(w, "{},{},{},{}", arc.model.model_id, arc.stage, x, y)?;
        }
    }
    Ok(())
}

pub fn arcs_csv_string(arcs: &[&Arc]) -> String {
    let mut buf = Vec::new();
    write_arcs_csv(arcs, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
