//! Compatibility metrics against the ensemble median: per-model MCC,
//! per-corpus ECC and per-family aggregates, with rankings.

use crate::arc::{Arc, EnsembleArcs};
use crate::model::ModelFamily;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use thiserror::Error;

/// Guard against division by an exactly-zero distance; a model identical to
/// the median is reported with the exact-match sentinel rather than an
/// error.
pub const EXACT_MATCH_EPSILON: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("arcs have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("arc too short for metrics (need at least 2 points, got {0})")]
    TooShort(usize),
    #[error("every model matches the median exactly; ECC is undefined")]
    AllExactMatch,
    #[error("model `{0}` has no family assigned")]
    EmptyFamily(String),
    #[error("no models to rank")]
    NoModels,
}

/// Euclidean norm of the pointwise difference between two equal-length
/// arcs.
fn euclidean_distance(a: &Arc, b: &Arc) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    let sum: f64 = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(p, q)| {
            let d = p.1 - q.1;
            d * d
        })
        .sum();
    Ok(sum.sqrt())
}

/// Model-corpus compatibility: arc length over the Euclidean distance to
/// the median arc, clamped by [`EXACT_MATCH_EPSILON`]. Higher means closer
/// agreement with the consensus.
pub fn mcc(model_arc: &Arc, median_arc: &Arc) -> Result<f64, MetricsError> {
    if model_arc.len() < 2 {
        return Err(MetricsError::TooShort(model_arc.len()));
    }
    let distance = euclidean_distance(model_arc, median_arc)?;
    Ok(model_arc.len() as f64 / distance.max(EXACT_MATCH_EPSILON))
}

/// True when the arc is numerically indistinguishable from the median.
pub fn is_exact_match(model_arc: &Arc, median_arc: &Arc) -> Result<bool, MetricsError> {
    Ok(euclidean_distance(model_arc, median_arc)? < EXACT_MATCH_EPSILON)
}

/// Ensemble-corpus compatibility: reciprocal of the summed
/// length-normalized model-to-median distances. Higher means a more
/// coherent ensemble on this corpus.
pub fn ecc(arcs: &[Arc], median_arc: &Arc) -> Result<f64, MetricsError> {
    let mut sum = 0.0;
    for arc in arcs {
        let distance = euclidean_distance(arc, median_arc)?;
        sum += distance / arc.len() as f64;
    }
    if sum < EXACT_MATCH_EPSILON {
        return Err(MetricsError::AllExactMatch);
    }
    Ok(1.0 / sum)
}

/// Family-level aggregation of MCC values, in both published readings: the
/// printed formula (reciprocal of the family sum) and the prose reading
/// (family mean). Both are returned, keyed by family.
pub fn mfc(
    mcc_values: &BTreeMap<String, f64>,
    families: &BTreeMap<String, ModelFamily>,
) -> Result<(BTreeMap<String, f64>, BTreeMap<String, f64>), MetricsError> {
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for (model, &value) in mcc_values {
        let family = families
            .get(model)
            .ok_or_else(|| MetricsError::EmptyFamily(model.clone()))?;
        let entry = sums.entry(family.to_string()).or_insert((0.0, 0));
        entry.0 += value;
        entry.1 += 1;
    }
    let literal = sums
        .iter()
        .map(|(f, (sum, _))| (f.clone(), 1.0 / sum))
        .collect();
    let mean = sums
        .iter()
        .map(|(f, (sum, count))| (f.clone(), sum / *count as f64))
        .collect();
    Ok((literal, mean))
}

/// Model ids by descending MCC; ties break lexicographically.
pub fn rank_models(mcc_values: &BTreeMap<String, f64>) -> Vec<String> {
    let mut ids: Vec<&String> = mcc_values.keys().collect();
    ids.sort_by(|a, b| {
        mcc_values[*b]
            .total_cmp(&mcc_values[*a])
            .then_with(|| a.cmp(b))
    });
    ids.into_iter().cloned().collect()
}

/// Per-corpus metric report: MCC per model, ECC, family aggregates and the
/// ranking.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricTable {
    pub corpus_id: String,
    pub mcc: BTreeMap<String, f64>,
    pub families: BTreeMap<String, ModelFamily>,
    pub exact_match: BTreeSet<String>,
    pub ecc: f64,
    pub mfc_literal: BTreeMap<String, f64>,
    pub mfc_mean: BTreeMap<String, f64>,
    pub ranking: Vec<String>,
}

/// Computes the full metric table for one corpus from its smoothed
/// full-length ensemble.
pub fn metric_table(ensemble: &EnsembleArcs) -> Result<MetricTable, MetricsError> {
    let mut mcc_values = BTreeMap::new();
    let mut families = BTreeMap::new();
    let mut exact = BTreeSet::new();
    for arc in &ensemble.arcs {
        let id = arc.model.model_id.clone();
        mcc_values.insert(id.clone(), mcc(arc, &ensemble.median)?);
        families.insert(id.clone(), arc.model.family);
        if is_exact_match(arc, &ensemble.median)? {
            exact.insert(id);
        }
    }
    if mcc_values.is_empty() {
        return Err(MetricsError::NoModels);
    }
    let ecc_value = ecc(&ensemble.arcs, &ensemble.median)?;
    let (mfc_literal, mfc_mean) = mfc(&mcc_values, &families)?;
    let ranking = rank_models(&mcc_values);
    Ok(MetricTable {
        corpus_id: ensemble.corpus_id.clone(),
        mcc: mcc_values,
        families,
        exact_match: exact,
        ecc: ecc_value,
        mfc_literal,
        mfc_mean,
        ranking,
    })
}

impl MetricTable {
    /// CSV: one row per model (model_id, family, mcc, rank, exact_match),
    /// then footer rows for ECC and the per-family aggregates.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model_id,family,mcc,rank,exact_match\n");
        for (rank, model) in self.ranking.iter().enumerate() {
            let family = self.families.get(model).map(|f| f.to_string());
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                model,
                family.as_deref().unwrap_or(""),
                self.mcc[model],
                rank + 1,
                self.exact_match.contains(model),
            ));
        }
        out.push_str(&format!("ecc,,{},,\n", self.ecc));
        for (family, value) in &self.mfc_literal {
            out.push_str(&format!("mfc_literal:{family},,{value},,\n"));
        }
        for (family, value) in &self.mfc_mean {
            out.push_str(&format!("mfc_mean:{family},,{value},,\n"));
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::Stage;
    use crate::model::ModelDescriptor;

    fn arc_of(id: &str, family: ModelFamily, ys: &[f64]) -> Arc {
        Arc {
            model: ModelDescriptor::new(id, family),
            corpus_id: "c".into(),
            stage: Stage::Smoothed,
            points: ys.iter().enumerate().map(|(i, &y)| (i as f64, y)).collect(),
        }
    }

    #[test]
    fn mcc_direct_formula() {
        let model = arc_of("m", ModelFamily::Lexical, &[0.0, 0.0, 0.0]);
        let median = arc_of("x", ModelFamily::Ensemble, &[1.0, 1.0, 1.0]);
        let v = mcc(&model, &median).unwrap();
        assert!((v - 3.0f64.sqrt()).abs() < 1e-12, "expected sqrt(3), got {v}");
    }

    #[test]
    fn mcc_exact_match_is_capped_not_an_error() {
        let model = arc_of("m", ModelFamily::Lexical, &[1.0, 2.0]);
        let median = model.clone();
        let v = mcc(&model, &median).unwrap();
        assert_eq!(v, 2.0 / EXACT_MATCH_EPSILON);
        assert!(is_exact_match(&model, &median).unwrap());
    }

    #[test]
    fn mcc_scales_as_sqrt_len_over_gap() {
        // constant per-point gap d: distance = sqrt(L)*d, so MCC = sqrt(L)/d
        for (len, gap) in [(4usize, 0.5f64), (16, 0.5), (9, 2.0)] {
            let model = arc_of("m", ModelFamily::Lexical, &vec![0.0; len]);
            let median = arc_of("x", ModelFamily::Ensemble, &vec![gap; len]);
            let v = mcc(&model, &median).unwrap();
            assert!((v - (len as f64).sqrt() / gap).abs() < 1e-12);
        }
    }

    #[test]
    fn mcc_length_mismatch() {
        let a = arc_of("a", ModelFamily::Lexical, &[1.0, 2.0]);
        let b = arc_of("b", ModelFamily::Lexical, &[1.0, 2.0, 3.0]);
        assert!(matches!(mcc(&a, &b), Err(MetricsError::LengthMismatch(2, 3))));
    }

    #[test]
    fn ecc_direct_formula() {
        // two models, each at normalized distance 0.5 from the median
        let median = arc_of("x", ModelFamily::Ensemble, &[0.0; 4]);
        let model = arc_of("m1", ModelFamily::Lexical, &[1.0; 4]); // dist 2, /4 = 0.5
        let model2 = arc_of("m2", ModelFamily::Lexical, &[-1.0; 4]);
        let v = ecc(&[model, model2], &median).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "expected 1.0, got {v}");
    }

    #[test]
    fn ecc_reciprocal_linearity() {
        let median = arc_of("x", ModelFamily::Ensemble, &[0.0; 4]);
        let far = vec![
            arc_of("m1", ModelFamily::Lexical, &[2.0; 4]),
            arc_of("m2", ModelFamily::Lexical, &[-2.0; 4]),
        ];
        let near = vec![
            arc_of("m1", ModelFamily::Lexical, &[1.0; 4]),
            arc_of("m2", ModelFamily::Lexical, &[-1.0; 4]),
        ];
        let e_far = ecc(&far, &median).unwrap();
        let e_near = ecc(&near, &median).unwrap();
        assert!((e_near - 2.0 * e_far).abs() < 1e-12, "halving distances doubles ECC");
    }

    #[test]
    fn ecc_decreases_when_a_divergent_model_joins() {
        let median = arc_of("x", ModelFamily::Ensemble, &[0.0; 4]);
        let coherent = vec![
            arc_of("m1", ModelFamily::Lexical, &[0.1; 4]),
            arc_of("m2", ModelFamily::Lexical, &[-0.1; 4]),
        ];
        let mut with_outlier = coherent.clone();
        with_outlier.push(arc_of("m3", ModelFamily::Transformer, &[5.0; 4]));
        assert!(ecc(&with_outlier, &median).unwrap() < ecc(&coherent, &median).unwrap());
    }

    #[test]
    fn ecc_all_exact_match_is_an_error() {
        let median = arc_of("x", ModelFamily::Ensemble, &[1.0, 2.0]);
        let arcs = vec![median.clone(), median.clone()];
        assert!(matches!(
            ecc(&arcs, &median),
            Err(MetricsError::AllExactMatch)
        ));
    }

    #[test]
    fn mfc_both_readings() {
        let mut mcc_values = BTreeMap::new();
        mcc_values.insert("a".to_string(), 2.0);
        mcc_values.insert("b".to_string(), 2.0);
        let mut families = BTreeMap::new();
        families.insert("a".to_string(), ModelFamily::Lexical);
        families.insert("b".to_string(), ModelFamily::Lexical);
        let (literal, mean) = mfc(&mcc_values, &families).unwrap();
        assert_eq!(literal["lexical"], 0.25);
        assert_eq!(mean["lexical"], 2.0);
    }

    #[test]
    fn mfc_singleton_family() {
        let mcc_values = BTreeMap::from([("a".to_string(), 4.0)]);
        let families = BTreeMap::from([("a".to_string(), ModelFamily::Dnn)]);
        let (literal, mean) = mfc(&mcc_values, &families).unwrap();
        assert_eq!(literal["dnn"], 0.25);
        assert_eq!(mean["dnn"], 4.0);
    }

    #[test]
    fn mfc_symmetric_across_equal_singletons() {
        let mcc_values = BTreeMap::from([
            ("a".to_string(), 3.0),
            ("b".to_string(), 3.0),
            ("c".to_string(), 3.0),
        ]);
        let families = BTreeMap::from([
            ("a".to_string(), ModelFamily::Lexical),
            ("b".to_string(), ModelFamily::Ml),
            ("c".to_string(), ModelFamily::Dnn),
        ]);
        let (literal, mean) = mfc(&mcc_values, &families).unwrap();
        let lit: Vec<f64> = literal.values().copied().collect();
        let mn: Vec<f64> = mean.values().copied().collect();
        assert!(lit.windows(2).all(|w| w[0] == w[1]));
        assert!(mn.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn mfc_missing_family_is_an_error() {
        let mcc_values = BTreeMap::from([("a".to_string(), 1.0)]);
        let families = BTreeMap::new();
        assert!(matches!(
            mfc(&mcc_values, &families),
            Err(MetricsError::EmptyFamily(m)) if m == "a"
        ));
    }

    #[test]
    fn mfc_literal_times_family_sum_is_one() {
        let mcc_values = BTreeMap::from([
            ("a".to_string(), 1.7),
            ("b".to_string(), 2.9),
            ("c".to_string(), 0.4),
        ]);
        let families = BTreeMap::from([
            ("a".to_string(), ModelFamily::Lexical),
            ("b".to_string(), ModelFamily::Lexical),
            ("c".to_string(), ModelFamily::Ml),
        ]);
        let (literal, _) = mfc(&mcc_values, &families).unwrap();
        assert!((literal["lexical"] * (1.7 + 2.9) - 1.0).abs() <= 1e-9);
        assert!((literal["ml"] * 0.4 - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn ranking_descends_and_breaks_ties_lexicographically() {
        let mcc_values = BTreeMap::from([
            ("a".to_string(), 2.0),
            ("b".to_string(), 1.0),
        ]);
        assert_eq!(rank_models(&mcc_values), vec!["a", "b"]);
        let tied = BTreeMap::from([("b".to_string(), 1.0), ("a".to_string(), 1.0)]);
        assert_eq!(rank_models(&tied), vec!["a", "b"]);
    }

    #[test]
    fn constructed_closest_model_ranks_first() {
        let median = arc_of("x", ModelFamily::Ensemble, &[0.5, -0.5, 0.25, 0.0]);
        let closest = arc_of("closest", ModelFamily::Lexical, &[0.51, -0.49, 0.26, 0.01]);
        let mid = arc_of("mid", ModelFamily::Ml, &[1.0, -1.0, 0.5, 0.5]);
        let far = arc_of("far", ModelFamily::Transformer, &[3.0, 3.0, 3.0, 3.0]);
        let mut mcc_values = BTreeMap::new();
        for arc in [&closest, &mid, &far] {
            mcc_values.insert(arc.model.model_id.clone(), mcc(arc, &median).unwrap());
        }
        assert_eq!(rank_models(&mcc_values)[0], "closest");
    }

    #[test]
    fn metric_table_is_consistent() {
        let arcs = vec![
            arc_of("a", ModelFamily::Lexical, &[0.0, 0.0, 0.0]),
            arc_of("b", ModelFamily::Ml, &[1.0, 1.0, 1.0]),
            arc_of("c", ModelFamily::Ml, &[2.0, 2.0, 2.0]),
        ];
        let ensemble = EnsembleArcs::new("c", arcs).unwrap();
        let table = metric_table(&ensemble).unwrap();
        assert_eq!(table.ranking[0], "b", "the middle arc IS the median");
        assert!(table.exact_match.contains("b"));
        assert_eq!(table.ranking.len(), 3);
        assert!(table.mcc.values().all(|v| v.is_finite() && *v > 0.0));
        assert!(table.ecc > 0.0);
        let csv = table.to_csv();
        assert!(csv.starts_with("model_id,family,mcc,rank,exact_match\n"));
        assert!(csv.contains("\necc,,"));
        assert!(csv.contains("mfc_literal:lexical,,"));
    }
}
