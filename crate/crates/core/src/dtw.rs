//! Dynamic time warping over arc y-values and the pairwise distance matrix.
//!
//! The x-coordinates are deliberately ignored: downsampling produces
//! irregular spacing and the warping itself absorbs it.

use crate::arc::Arc;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("cannot compute DTW distance against an empty arc")]
    EmptyArc,
    #[error("need at least 2 arcs for a distance matrix (got {0})")]
    TooFewArcs(usize),
}

/// Local cost between aligned points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostKind {
    /// Squared difference accumulated, square root of the total returned.
    #[default]
    SquaredEuclidean,
    /// Absolute difference accumulated, total returned as-is.
    Absolute,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DtwOptions {
    pub cost: CostKind,
    /// Sakoe-Chiba band half-width; `None` leaves the warp unconstrained.
    /// The band widens automatically to at least the length difference so a
    /// path always exists.
    pub window: Option<usize>,
}

/// DTW distance between two arcs with default options (squared local cost,
/// no band).
pub fn dtw_distance(a: &Arc, b: &Arc) -> Result<f64, SimilarityError> {
    dtw_distance_with(&a.ys(), &b.ys(), &DtwOptions::default())
}

/// DTW distance between two y-value sequences.
pub fn dtw_distance_with(
    a: &[f64],
    b: &[f64],
    opts: &DtwOptions,
) -> Result<f64, SimilarityError> {
    if a.is_empty() || b.is_empty() {
        return Err(SimilarityError::EmptyArc);
    }
    let n = a.len();
    let m = b.len();
    let band = opts
        .window
        .map(|w| w.max(n.abs_diff(m)))
        .unwrap_or(usize::MAX);

    let mut prev = vec![f64::INFINITY; m + 1];
    let mut curr = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;

    for i in 1..=n {
        curr.fill(f64::INFINITY);
        let lo = if band == usize::MAX { 1 } else { i.saturating_sub(band).max(1) };
        let hi = if band == usize::MAX { m } else { (i + band).min(m) };
        for j in lo..=hi {
            let cost = match opts.cost {
                CostKind::SquaredEuclidean => {
                    let d = a[i - 1] - b[j - 1];
                    d * d
                }
                CostKind::Absolute => (a[i - 1] - b[j - 1]).abs(),
            };
            let best = prev[j].min(curr[j - 1]).min(prev[j - 1]);
            curr[j] = cost + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }

    let total = prev[m];
    Ok(match opts.cost {
        CostKind::SquaredEuclidean => total.sqrt(),
        CostKind::Absolute => total,
    })
}

/// Symmetric matrix of pairwise DTW distances, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    /// CSV with a label header row and a leading label column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("model_id");
        for label in &self.labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            for j in 0..self.labels.len() {
                out.push(',');
                out.push_str(&self.values[i][j].to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

/// Computes each unordered pair once and mirrors it.
pub fn distance_matrix(arcs: &[Arc], opts: &DtwOptions) -> Result<DistanceMatrix, SimilarityError> {
    if arcs.len() < 2 {
        return Err(SimilarityError::TooFewArcs(arcs.len()));
    }
    let n = arcs.len();
    let ys: Vec<Vec<f64>> = arcs.iter().map(Arc::ys).collect();
    let labels = arcs.iter().map(|a| a.model.model_id.clone()).collect();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = dtw_distance_with(&ys[i], &ys[j], opts)?;
            values[i][j] = d;
            values[j][i] = d;
        }
    }
    Ok(DistanceMatrix { labels, values })
}
