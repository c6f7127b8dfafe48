//! Sentiment lexicons: token → valence maps loaded from TSV files, plus the
//! dictionaries bundled with the crate.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;
use thiserror::Error;

const AFINN_TSV: &str = include_str!("../data/lexicons/afinn.tsv");
const BING_TSV: &str = include_str!("../data/lexicons/bing.tsv");
const VADER_TSV: &str = include_str!("../data/lexicons/vader.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("duplicate token `{0}` in lexicon")]
    DuplicateToken(String),
    #[error("non-finite valence on line {0}")]
    NonFiniteValence(usize),
    #[error("malformed lexicon line {0}: expected token<TAB>valence")]
    Malformed(usize),
    #[error("lexicon has no entries")]
    EmptyLexicon,
    #[error("failed to read lexicon: {0}")]
    Io(#[from] std::io::Error),
}

/// A token → valence dictionary in model-native units (e.g. −5..+5).
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub name: String,
    pub entries: BTreeMap<String, f64>,
}

impl Lexicon {
    pub fn valence(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Loads a lexicon from a `token<TAB>valence` TSV file.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let contents = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lexicon".to_string());
    parse_lexicon(&name, &contents)
}

/// Parses TSV lexicon contents. Duplicate tokens are an error; blank lines
/// are skipped.
pub fn parse_lexicon(name: &str, contents: &str) -> Result<Lexicon, LexiconError> {
    let mut entries = BTreeMap::new();
    for (i, line) in contents.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (token, value) = line
            .split_once('\t')
            .ok_or(LexiconError::Malformed(lineno))?;
        let token = token.trim();
        if token.is_empty() {
            return Err(LexiconError::Malformed(lineno));
        }
        let valence: f64 = value
            .trim()
            .parse()
            .map_err(|_| LexiconError::Malformed(lineno))?;
        if !valence.is_finite() {
            return Err(LexiconError::NonFiniteValence(lineno));
        }
        if entries.insert(token.to_string(), valence).is_some() {
            return Err(LexiconError::DuplicateToken(token.to_string()));
        }
    }
    if entries.is_empty() {
        return Err(LexiconError::EmptyLexicon);
    }
    Ok(Lexicon {
        name: name.to_string(),
        entries,
    })
}

/// Dictionaries shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundledLexicon {
    /// AFINN-111, integer valences −5..+5.
    Afinn,
    /// Hu-Liu opinion lexicon, ±1.
    Bing,
    /// VADER wordlist, mean human-rated valences −4..+4.
    Vader,
}

impl BundledLexicon {
    pub fn name(self) -> &'static str {
        match self {
            BundledLexicon::Afinn => "afinn",
            BundledLexicon::Bing => "bing",
            BundledLexicon::Vader => "vader",
        }
    }

    pub fn get(self) -> &'static Lexicon {
        static AFINN: OnceLock<Lexicon> = OnceLock::new();
        static BING: OnceLock<Lexicon> = OnceLock::new();
        static VADER: OnceLock<Lexicon> = OnceLock::new();
        let (cell, raw) = match self {
            BundledLexicon::Afinn => (&AFINN, AFINN_TSV),
            BundledLexicon::Bing => (&BING, BING_TSV),
            BundledLexicon::Vader => (&VADER, VADER_TSV),
        };
        cell.get_or_init(|| {
            parse_lexicon(self.name(), raw).expect("bundled lexicon is well-formed")
        })
    }

    pub fn all() -> [BundledLexicon; 3] {
        [
            BundledLexicon::Afinn,
            BundledLexicon::Bing,
            BundledLexicon::Vader,
        ]
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "afinn" => Some(BundledLexicon::Afinn),
            "bing" => Some(BundledLexicon::Bing),
            "vader" => Some(BundledLexicon::Vader),
            _ => None,
        }
    }
}
