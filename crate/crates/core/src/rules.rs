//! Valence-shifter rules layered over a lexicon: negation, degree modifiers,
//! adversative conjunctions, exclamation and word-shape boosts.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use thiserror::Error;

const AMPLIFIERS_TSV: &str = include_str!("../data/amplifiers.tsv");

#[derive(Debug, Error)]
pub enum RuleSetError {
    #[error("failed to read rules file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse rules file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("non-finite coefficient `{0}`")]
    NonFinite(&'static str),
    #[error("negation_scope must be at least 1")]
    ZeroScope,
}

/// Coefficients for contextual sentiment modification.
///
/// Every field can be overridden from a TOML rules file; the defaults are
/// the documented shipped constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleSet {
    /// Tokens that flip nearby sentiment.
    pub negators: BTreeSet<String>,
    /// How many tokens before a lexicon hit a negator may sit.
    pub negation_scope: usize,
    /// Multiplier applied per negator found in scope.
    pub negation_factor: f64,
    /// Degree modifiers: token → multiplicative boost (>1 amplifies,
    /// <1 dampens) applied when immediately before a lexicon hit.
    pub amplifiers: BTreeMap<String, f64>,
    /// Conjunctions that reweight the clause before and after them.
    pub adversatives: BTreeSet<String>,
    pub adversative_before_factor: f64,
    pub adversative_after_factor: f64,
    /// Per trailing `!`, the sentence total is multiplied by
    /// `1 + exclaim_boost`, at most `exclaim_cap` times.
    pub exclaim_boost: f64,
    pub exclaim_cap: usize,
    /// Boost for an all-caps lexicon word in the raw sentence.
    pub allcaps_boost: f64,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self {
            negators: ["not", "no", "never", "neither", "nor", "none", "cannot"]
                .into_iter()
                .map(String::from)
                .collect(),
            negation_scope: 3,
            negation_factor: -0.5,
            amplifiers: default_amplifiers(),
            adversatives: [
                "but",
                "yet",
                "however",
                "although",
                "though",
                "nevertheless",
                "nonetheless",
            ]
            .into_iter()
            .map(String::from)
            .collect(),
            adversative_before_factor: 0.5,
            adversative_after_factor: 1.5,
            exclaim_boost: 0.1,
            exclaim_cap: 3,
            allcaps_boost: 0.2,
        }
    }
}

fn default_amplifiers() -> BTreeMap<String, f64> {
    AMPLIFIERS_TSV
        .lines()
        .filter_map(|l| {
            let (token, boost) = l.trim().split_once('\t')?;
            Some((token.to_string(), boost.parse().ok()?))
        })
        .collect()
}

impl RuleSet {
    /// Loads rule overrides from a TOML file; omitted keys keep their
    /// defaults.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, RuleSetError> {
        let contents = std::fs::read_to_string(path)?;
        Self::parse(&contents)
    }

    pub fn parse(contents: &str) -> Result<Self, RuleSetError> {
        let rules: RuleSet = toml::from_str(contents)?;
        rules.validate()?;
        Ok(rules)
    }

    pub fn validate(&self) -> Result<(), RuleSetError> {
        if self.negation_scope == 0 {
            return Err(RuleSetError::ZeroScope);
        }
        if !self.negation_factor.is_finite() {
            return Err(RuleSetError::NonFinite("negation_factor"));
        }
        if !self.adversative_before_factor.is_finite() {
            return Err(RuleSetError::NonFinite("adversative_before_factor"));
        }
        if !self.adversative_after_factor.is_finite() {
            return Err(RuleSetError::NonFinite("adversative_after_factor"));
        }
        if !self.exclaim_boost.is_finite() {
            return Err(RuleSetError::NonFinite("exclaim_boost"));
        }
        if !self.allcaps_boost.is_finite() {
            return Err(RuleSetError::NonFinite("allcaps_boost"));
        }
        if self.amplifiers.values().any(|b| !b.is_finite()) {
            return Err(RuleSetError::NonFinite("amplifiers"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_documented_constants() {
        let r = RuleSet::default();
        assert_eq!(r.negation_scope, 3);
        assert_eq!(r.negation_factor, -0.5);
        assert_eq!(r.amplifiers.get("very"), Some(&1.3));
        assert_eq!(r.adversative_before_factor, 0.5);
        assert_eq!(r.adversative_after_factor, 1.5);
        assert_eq!(r.exclaim_boost, 0.1);
        assert_eq!(r.exclaim_cap, 3);
        assert_eq!(r.allcaps_boost, 0.2);
        assert!(r.negators.contains("not"));
        assert!(r.adversatives.contains("yet"));
    }

    #[test]
    fn toml_overrides_merge_with_defaults() {
        let r = RuleSet::parse("negation_factor = -0.8\nexclaim_cap = 1\n").unwrap();
        assert_eq!(r.negation_factor, -0.8);
        assert_eq!(r.exclaim_cap, 1);
        assert_eq!(r.negation_scope, 3);
    }

    #[test]
    fn zero_scope_rejected() {
        assert!(matches!(
            RuleSet::parse("negation_scope = 0"),
            Err(RuleSetError::ZeroScope)
        ));
    }

    #[test]
    fn nonfinite_coefficient_rejected() {
        assert!(matches!(
            RuleSet::parse("negation_factor = inf"),
            Err(RuleSetError::NonFinite(_))
        ));
    }
}
