//! Text normalization and the stopword list shared by retrieval, question
//! parsing and alignment.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Lowercases, turns every non-alphanumeric character into a space and
/// collapses runs of whitespace.
pub fn normalize(text: &str) -> String {
    let mapped: String = text.chars().map(|c| if c.is_alphanumeric() { c } else { ' ' }).flat_map(char::to_lowercase).collect();
    mapped.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalized token sequence of `text`.
pub fn tokenize(text: &str) -> Vec<String> {
    normalize(text).split(' ').filter(|t| !t.is_empty()).map(str::to_owned).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords {
    words: HashSet<String>,
}

impl Stopwords {
    /// The list shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS)
    }

    /// One word per line, `#` comments allowed.
    pub fn parse(src: &str) -> Self {
        let words = src
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(normalize)
            .filter(|w| !w.is_empty())
            .collect();
        Stopwords { words }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let sw = Self::parse(&src);
        if sw.is_empty() {
            return Err(Error::Config(format!("stopword file {} is empty", path.display())));
        }
        Ok(sw)
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Stopwords { words: words.into_iter().map(|w| normalize(w.as_ref())).collect() }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Normalized tokens of `text` that are not stopwords.
    pub fn content_tokens(&self, text: &str) -> Vec<String> {
        tokenize(text).into_iter().filter(|t| !self.contains(t)).collect()
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Self::bundled()
    }
}

/// Crude suffix stripper standing in for lemmatization.
pub fn stem(word: &str) -> &str {
    for suffix in ["ing", "ed", "es", "s"] {
        if let Some(base) = word.strip_suffix(suffix) {
            // "es" only after a sibilant: boxes, wishes, but not states
            let sibilant = ["s", "x", "z", "ch", "sh"].iter().any(|e| base.ends_with(e));
            if base.chars().count() >= 3 && (suffix != "es" || sibilant) {
                return base;
            }
        }
    }
    word
}
