//! Tokenisation shared by keyword extraction, seed matching and the
//! lexicon scorers.

use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

fn word_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\w+(?:['’]\w+)*").expect("valid word regex"))
}

/// Word tokens in original case. Internal apostrophes are kept, so
/// `"don't"` and `"Obama's"` are single tokens.
pub fn words(text: &str) -> Vec<&str> {
    word_regex().find_iter(text).map(|m| m.as_str()).collect()
}

/// The bundled English stop-word list.
pub fn stopwords() -> &'static StopWords {
    static SW: OnceLock<StopWords> = OnceLock::new();
    SW.get_or_init(|| StopWords::parse(BUNDLED_STOPWORDS))
}

#[derive(Debug, Clone, Default)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    /// One token per line; blank lines and `#` comments are skipped.
    pub fn parse(src: &str) -> Self {
        StopWords(
            src.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| l.to_lowercase())
                .collect(),
        )
    }

    /// `word` must already be lowercased.
    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }
}

/// Strip an English possessive suffix: `obama's` -> `obama`.
fn strip_possessive(word: &str) -> &str {
    word.strip_suffix("'s")
        .or_else(|| word.strip_suffix("’s"))
        .unwrap_or(word)
}

/// Index terms: lowercased words with possessives stripped, stop-words and
/// tokens shorter than three characters removed. Order is preserved.
pub fn terms(text: &str) -> Vec<String> {
    let sw = stopwords();
    words(text)
        .into_iter()
        .filter_map(|w| {
            let lower = w.to_lowercase();
            if sw.contains(&lower) {
                return None;
            }
            let t = strip_possessive(&lower);
            if t.chars().count() < 3 || sw.contains(t) {
                None
            } else {
                Some(t.to_string())
            }
        })
        .collect()
}
