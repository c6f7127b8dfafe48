//! Text preprocessing: turn a raw narrative into an ordered list of clean,
//! tokenized segments.
//!
//! The steps mirror the common preprocessing shared by lexicon-oriented
//! scorers: drop non-printable characters, lowercase, expand contractions
//! from a fixed table, rejoin end-of-line hyphenations, split sentences on
//! terminal punctuation with an abbreviation guard, then tokenize with
//! punctuation filtering, optional number removal and optional stemming.

use crate::porter;
use regex::RegexSet;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

const CONTRACTIONS_TSV: &str = include_str!("../data/contractions.tsv");
const ABBREVIATIONS_TXT: &str = include_str!("../data/abbreviations.txt");

/// One raw plain-text narrative, paragraphs separated by blank lines.
#[derive(Debug, Clone)]
pub struct RawDocument {
    pub corpus_id: String,
    pub text: String,
}

impl RawDocument {
    pub fn new(corpus_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            corpus_id: corpus_id.into(),
            text: text.into(),
        }
    }
}

/// Returns true when `id` is non-empty and matches `[a-z0-9_-]+`.
pub fn valid_corpus_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

/// One preprocessed sentence of a narrative, carrying its position index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub index: usize,
    pub raw: String,
    pub tokens: Vec<String>,
}

/// Options for normalization, segmentation and tokenization.
#[derive(Debug, Clone)]
pub struct PrepOptions {
    pub expand_contractions: bool,
    pub remove_numbers: bool,
    pub stem: bool,
    /// Abbreviations that suppress a sentence split after their trailing
    /// period. Entries always end with `.`.
    pub abbreviation_guard: BTreeSet<String>,
    /// Line-level regexes; a normalized line matching any of them is dropped
    /// (defaults target chapter/book headings).
    pub strip_patterns: Vec<String>,
    /// Contraction table applied when `expand_contractions` is set.
    pub contractions: BTreeMap<String, String>,
}

impl Default for PrepOptions {
    fn default() -> Self {
        Self {
            expand_contractions: true,
            remove_numbers: true,
            stem: false,
            abbreviation_guard: default_abbreviations(),
            strip_patterns: vec![r"^chapter\b".into(), r"^book\b".into()],
            contractions: default_contractions(),
        }
    }
}

impl PrepOptions {
    /// Replaces the abbreviation guard, appending the trailing `.` to any
    /// entry that lacks it.
    pub fn with_abbreviations<I, S>(mut self, entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.abbreviation_guard = entries
            .into_iter()
            .map(|e| {
                let mut e = e.into().to_lowercase();
                if !e.ends_with('.') {
                    e.push('.');
                }
                e
            })
            .collect();
        self
    }
}

/// The default abbreviation guard (common English honorifics).
pub fn default_abbreviations() -> BTreeSet<String> {
    parse_abbreviations(ABBREVIATIONS_TXT)
}

/// Parses a guard file: one abbreviation per line, `#` comments allowed.
pub fn parse_abbreviations(contents: &str) -> BTreeSet<String> {
    contents
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut e = l.to_lowercase();
            if !e.ends_with('.') {
                e.push('.');
            }
            e
        })
        .collect()
}

/// The fixed contraction table shipped with the crate.
pub fn default_contractions() -> BTreeMap<String, String> {
    parse_contractions(CONTRACTIONS_TSV)
}

/// Parses a contraction table: `contraction<TAB>expansion` per line.
pub fn parse_contractions(contents: &str) -> BTreeMap<String, String> {
    contents
        .lines()
        .filter_map(|l| {
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                return None;
            }
            let (from, to) = l.split_once('\t')?;
            Some((from.trim().to_lowercase(), to.trim().to_lowercase()))
        })
        .collect()
}

/// Normalizes a document: rejoins end-of-line hyphenations, removes
/// non-printable characters, lowercases, drops heading lines matching
/// `strip_patterns` and expands contractions when enabled. Paragraph
/// boundaries (blank lines) are preserved. Empty input yields empty output.
pub fn normalize_text(doc: &RawDocument, opts: &PrepOptions) -> String {
    let mut text = doc.text.replace("\r\n", "\n").replace('\r', "\n");
    // Typographic apostrophes fold to ASCII so the contraction table and
    // abbreviation guard match either form.
    text = text.replace('\u{2019}', "'");

    let text = rejoin_hyphenations(&text);
    let text = filter_nonprintable(&text);
    let text = text.to_lowercase();

    let stripper = if opts.strip_patterns.is_empty() {
        None
    } else {
        RegexSet::new(&opts.strip_patterns).ok()
    };

    let mut lines: Vec<String> = Vec::new();
    for line in text.split('\n') {
        if let Some(set) = &stripper {
            if set.is_match(line.trim()) {
                continue;
            }
        }
        if opts.expand_contractions {
            lines.push(expand_line(line, &opts.contractions));
        } else {
            lines.push(line.to_string());
        }
    }
    let mut out = lines.join("\n");
    // Normalization must not invent leading/trailing blank lines.
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

/// Joins `word-\nword` across a line break into `wordword`.
fn rejoin_hyphenations(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if (c == '-' || c == '\u{00AD}')
            && i + 1 < chars.len()
            && chars[i + 1] == '\n'
            && i > 0
            && chars[i - 1].is_alphabetic()
            && i + 2 < chars.len()
            && chars[i + 2].is_alphabetic()
        {
            i += 2; // skip the hyphen and the newline, joining the word halves
            continue;
        }
        out.push(c);
        i += 1;
    }
    out
}

fn filter_nonprintable(text: &str) -> String {
    text.chars()
        .filter_map(|c| match c {
            '\n' => Some('\n'),
            '\t' => Some(' '),
            '\u{200B}'..='\u{200F}' | '\u{FEFF}' | '\u{00AD}' | '\u{2028}' | '\u{2029}' => None,
            c if c.is_control() => None,
            c => Some(c),
        })
        .collect()
}

/// Expands contraction chunks within one line, leaving surrounding
/// punctuation intact. Whitespace runs inside the line collapse to single
/// spaces.
fn expand_line(line: &str, table: &BTreeMap<String, String>) -> String {
    let mut parts: Vec<String> = Vec::new();
    for chunk in line.split_whitespace() {
        // Peel leading/trailing punctuation but keep apostrophes attached:
        // entries like `'tis` begin with one.
        let start = chunk
            .find(|c: char| c.is_alphanumeric() || c == '\'')
            .unwrap_or(chunk.len());
        let end = chunk
            .rfind(|c: char| c.is_alphanumeric() || c == '\'')
            .map(|p| p + chunk[p..].chars().next().unwrap().len_utf8())
            .unwrap_or(chunk.len());
        if start >= end {
            parts.push(chunk.to_string());
            continue;
        }
        let (prefix, rest) = chunk.split_at(start);
        let (core, suffix) = rest.split_at(end - start);
        match table.get(core) {
            Some(expansion) => parts.push(format!("{prefix}{expansion}{suffix}")),
            None => parts.push(chunk.to_string()),
        }
    }
    parts.join(" ")
}

/// Splits normalized text into sentences on terminal punctuation (`.` `!`
/// `?`) followed by whitespace, unless the period belongs to a guarded
/// abbreviation. Paragraph boundaries always terminate the current segment.
/// Returned segments have `raw` populated and `tokens` empty; indices are
/// contiguous in document order and empty sentences are dropped.
pub fn segment(normalized: &str, opts: &PrepOptions) -> Vec<Segment> {
    let mut segments: Vec<Segment> = Vec::new();

    for paragraph in split_paragraphs(normalized) {
        let chars: Vec<char> = paragraph.chars().collect();
        let mut start = 0;
        for i in 0..chars.len() {
            let c = chars[i];
            if c != '.' && c != '!' && c != '?' {
                continue;
            }
            let at_end = i + 1 >= chars.len();
            let before_space = !at_end && chars[i + 1].is_whitespace();
            if !(at_end || before_space) {
                continue;
            }
            if c == '.' && guarded(&chars, i, &opts.abbreviation_guard) {
                continue;
            }
            push_segment(&mut segments, &chars[start..=i]);
            start = i + 1;
        }
        if start < chars.len() {
            push_segment(&mut segments, &chars[start..]);
        }
    }

    for (i, seg) in segments.iter_mut().enumerate() {
        seg.index = i;
    }
    segments
}

fn split_paragraphs(text: &str) -> Vec<String> {
    let mut paragraphs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.split('\n') {
        if line.trim().is_empty() {
            if !current.is_empty() {
                paragraphs.push(current.join(" "));
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current.join(" "));
    }
    paragraphs
}

/// True when the period at `chars[i]` terminates a guarded abbreviation.
fn guarded(chars: &[char], i: usize, guard: &BTreeSet<String>) -> bool {
    if guard.is_empty() {
        return false;
    }
    let mut start = i;
    while start > 0 && !chars[start - 1].is_whitespace() {
        start -= 1;
    }
    let token: String = chars[start..=i].iter().collect();
    let token = token.trim_start_matches(|c: char| !c.is_alphanumeric() && c != '.');
    guard.contains(token)
}

fn push_segment(segments: &mut Vec<Segment>, chars: &[char]) {
    let raw: String = chars.iter().collect();
    let raw = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    if raw.is_empty() {
        return;
    }
    segments.push(Segment {
        index: 0,
        raw,
        tokens: Vec::new(),
    });
}

/// Populates a segment's tokens: whitespace-split words with edge
/// punctuation stripped, lowercased, with digit-bearing tokens dropped when
/// `remove_numbers` and Porter stemming applied when `stem`.
pub fn tokenize(seg: &Segment, opts: &PrepOptions) -> Segment {
    let tokens = tokenize_words(&seg.raw)
        .into_iter()
        .filter(|t| !(opts.remove_numbers && t.chars().any(|c| c.is_ascii_digit())))
        .map(|t| {
            let t = t.to_lowercase();
            if opts.stem {
                porter::stem(&t)
            } else {
                t
            }
        })
        .collect();
    Segment {
        index: seg.index,
        raw: seg.raw.clone(),
        tokens,
    }
}

/// Whitespace-split words with leading/trailing punctuation stripped and
/// pure-punctuation chunks removed. Case is preserved.
pub(crate) fn tokenize_words(raw: &str) -> Vec<String> {
    raw.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\''))
        .map(|w| w.trim_matches('\''))
        .filter(|w| w.chars().any(|c| c.is_alphanumeric()))
        .map(str::to_string)
        .collect()
}

/// Convenience: normalize, segment and tokenize a document in one call.
pub fn prepare(doc: &RawDocument, opts: &PrepOptions) -> Vec<Segment> {
    let normalized = normalize_text(doc, opts);
    segment(&normalized, opts)
        .iter()
        .map(|s| tokenize(s, opts))
        .collect()
}
