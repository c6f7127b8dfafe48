//! Per-segment sentiment scoring: plain lexicon sums and the rule-augmented
//! heuristic variant.

use crate::lexicon::Lexicon;
use crate::model::{ModelDescriptor, ModelFamily, SentimentSeries};
use crate::prep::{tokenize_words, Segment};
use crate::rules::RuleSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("corpus has no segments")]
    EmptyCorpus,
}

/// Sum of lexicon valences over a segment's tokens; 0.0 when nothing
/// matches. Order-independent by construction.
pub fn score_lexical(seg: &Segment, lex: &Lexicon) -> f64 {
    seg.tokens.iter().filter_map(|t| lex.valence(t)).sum()
}

/// Lexicon sum modified by contextual rules: negation within a token
/// window, degree modifiers immediately before a hit, all-caps emphasis,
/// an adversative-conjunction clause split, and trailing exclamation
/// boosts on the sentence total.
///
/// Words are re-derived from `seg.raw` so case and punctuation cues are
/// visible even though `seg.tokens` is lowercase. Without any cues present
/// the result equals [`score_lexical`].
pub fn score_heuristic(seg: &Segment, lex: &Lexicon, rules: &RuleSet) -> f64 {
    let words = tokenize_words(&seg.raw);
    let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();

    let mut contributions: Vec<f64> = vec![0.0; words.len()];
    for (i, token) in lower.iter().enumerate() {
        let Some(mut v) = lex.valence(token) else {
            continue;
        };
        let window_start = i.saturating_sub(rules.negation_scope);
        for negator in &lower[window_start..i] {
            if rules.negators.contains(negator) {
                v *= rules.negation_factor;
            }
        }
        if i > 0 {
            if let Some(boost) = rules.amplifiers.get(&lower[i - 1]) {
                v *= boost;
            }
        }
        if is_allcaps(&words[i]) {
            v *= 1.0 + rules.allcaps_boost;
        }
        contributions[i] = v;
    }

    let adversative_at = lower.iter().position(|t| rules.adversatives.contains(t));
    let mut total = match adversative_at {
        Some(k) => {
            let before: f64 = contributions[..k].iter().sum();
            let after: f64 = contributions[k + 1..].iter().sum();
            rules.adversative_before_factor * before + rules.adversative_after_factor * after
        }
        None => contributions.iter().sum(),
    };

    let exclaims = trailing_exclaims(&seg.raw).min(rules.exclaim_cap);
    total *= (1.0 + rules.exclaim_boost).powi(exclaims as i32);
    total
}

/// A word shouting in all caps: at least two alphabetic characters, none
/// lowercase.
fn is_allcaps(word: &str) -> bool {
    let mut alpha = 0;
    for c in word.chars() {
        if c.is_alphabetic() {
            if c.is_lowercase() {
                return false;
            }
            alpha += 1;
        }
    }
    alpha >= 2
}

/// Number of `!` at the end of the sentence, looking through closing
/// quotes and brackets.
fn trailing_exclaims(raw: &str) -> usize {
    raw.trim_end()
        .chars()
        .rev()
        .skip_while(|c| matches!(c, '"' | '\'' | '\u{201D}' | '\u{2019}' | ')' | ']' | '}'))
        .take_while(|&c| c == '!')
        .count()
}

/// How a built-in scorer combines its lexicon with rules.
#[derive(Debug, Clone)]
pub enum ScorerMode {
    Lexical,
    Heuristic(RuleSet),
}

/// A configured scorer: identity plus lexicon plus mode.
#[derive(Debug, Clone)]
pub struct ScorerSpec {
    pub model: ModelDescriptor,
    pub lexicon: Lexicon,
    pub mode: ScorerMode,
}

impl ScorerSpec {
    pub fn lexical(model_id: impl Into<String>, lexicon: Lexicon) -> Self {
        Self {
            model: ModelDescriptor::new(model_id, ModelFamily::Lexical),
            lexicon,
            mode: ScorerMode::Lexical,
        }
    }

    pub fn heuristic(model_id: impl Into<String>, lexicon: Lexicon, rules: RuleSet) -> Self {
        Self {
            model: ModelDescriptor::new(model_id, ModelFamily::Heuristic),
            lexicon,
            mode: ScorerMode::Heuristic(rules),
        }
    }

    pub fn score_segment(&self, seg: &Segment) -> f64 {
        match &self.mode {
            ScorerMode::Lexical => score_lexical(seg, &self.lexicon),
            ScorerMode::Heuristic(rules) => score_heuristic(seg, &self.lexicon, rules),
        }
    }
}

/// Scores every segment in order with the configured scorer.
pub fn score_corpus(
    segments: &[Segment],
    corpus_id: &str,
    spec: &ScorerSpec,
) -> Result<SentimentSeries, ScoreError> {
    if segments.is_empty() {
        return Err(ScoreError::EmptyCorpus);
    }
    let values = segments.iter().map(|s| spec.score_segment(s)).collect();
    Ok(SentimentSeries {
        model: spec.model.clone(),
        corpus_id: corpus_id.to_string(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_lexicon;
    use crate::prep::{tokenize, PrepOptions};

    fn lex() -> Lexicon {
        parse_lexicon("t", "good\t3\nbad\t-3\ngreat\t3\nsad\t-2\nuplifting\t2").unwrap()
    }

    fn seg(raw: &str) -> Segment {
        let s = Segment {
            index: 0,
            raw: raw.to_string(),
            tokens: vec![],
        };
        tokenize(&s, &PrepOptions::default())
    }

    #[test]
    fn lexical_single_match() {
        assert_eq!(score_lexical(&seg("good"), &lex()), 3.0);
    }

    #[test]
    fn lexical_no_matches() {
        assert_eq!(score_lexical(&seg("the a"), &lex()), 0.0);
    }

    #[test]
    fn lexical_opposites_cancel() {
        assert_eq!(score_lexical(&seg("good bad"), &lex()), 0.0);
    }

    #[test]
    fn heuristic_negation_flips_sign() {
        let v = score_heuristic(&seg("not bad"), &lex(), &RuleSet::default());
        assert!((v - 1.5).abs() < 1e-12, "expected +1.5, got {v}");
    }

    #[test]
    fn heuristic_amplifier_boosts() {
        let v = score_heuristic(&seg("very good"), &lex(), &RuleSet::default());
        assert!((v - 3.9).abs() < 1e-12, "expected 3.9, got {v}");
    }

    #[test]
    fn heuristic_inert_without_cues() {
        let s = seg("good");
        let rules = RuleSet::default();
        assert_eq!(score_heuristic(&s, &lex(), &rules), score_lexical(&s, &lex()));
    }

    #[test]
    fn heuristic_negation_respects_scope() {
        let rules = RuleSet::default();
        // negator 4 tokens before the hit is out of the default scope of 3
        let v = score_heuristic(&seg("not one two three bad"), &lex(), &rules);
        assert_eq!(v, -3.0);
    }

    #[test]
    fn heuristic_exclaims_boost_and_cap() {
        let rules = RuleSet::default();
        let one = score_heuristic(&seg("great!"), &lex(), &rules);
        assert!((one - 3.0 * 1.1).abs() < 1e-12);
        let many = score_heuristic(&seg("great!!!!!"), &lex(), &rules);
        assert!((many - 3.0 * 1.1f64.powi(3)).abs() < 1e-12, "cap at 3");
        let quoted = score_heuristic(&seg("\"great!\""), &lex(), &rules);
        assert!((quoted - 3.0 * 1.1).abs() < 1e-12, "looks through quotes");
    }

    #[test]
    fn heuristic_allcaps_boost() {
        let rules = RuleSet::default();
        let v = score_heuristic(&seg("GREAT"), &lex(), &rules);
        assert!((v - 3.6).abs() < 1e-12, "expected 3.6, got {v}");
        // single letters never count as shouting
        let s = seg("I was good");
        assert_eq!(score_heuristic(&s, &lex(), &rules), 3.0);
    }

    #[test]
    fn heuristic_adversative_reweights_clauses() {
        let rules = RuleSet::default();
        let v = score_heuristic(&seg("sad yet uplifting"), &lex(), &rules);
        // 0.5 * (-2) + 1.5 * 2
        assert!((v - 2.0).abs() < 1e-12, "expected 2.0, got {v}");
    }

    #[test]
    fn heuristic_is_order_sensitive_where_lexical_is_not() {
        let lex = lex();
        let rules = RuleSet::default();
        let a = seg("not bad");
        let b = seg("bad not");
        assert_eq!(score_lexical(&a, &lex), score_lexical(&b, &lex));
        assert_ne!(
            score_heuristic(&a, &lex, &rules),
            score_heuristic(&b, &lex, &rules)
        );
    }

    #[test]
    fn corpus_scoring_has_one_value_per_segment() {
        let segs: Vec<Segment> = ["good.", "the a.", "bad."].iter().map(|s| seg(s)).collect();
        let spec = ScorerSpec::lexical("t", lex());
        let series = score_corpus(&segs, "c", &spec).unwrap();
        assert_eq!(series.values, vec![3.0, 0.0, -3.0]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let spec = ScorerSpec::lexical("t", lex());
        assert!(matches!(
            score_corpus(&[], "c", &spec),
            Err(ScoreError::EmptyCorpus)
        ));
    }

    #[test]
    fn all_stopword_corpus_scores_zero() {
        let segs: Vec<Segment> = [seg("the of and"), seg("a an it")].to_vec();
        let spec = ScorerSpec::lexical("t", lex());
        let series = score_corpus(&segs, "c", &spec).unwrap();
        assert!(series.values.iter().all(|&v| v == 0.0));
    }
}
