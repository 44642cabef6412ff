//! Text-only baselines: article/title polarity and content statistics.

use std::collections::HashSet;
use std::sync::OnceLock;

use chrono::Datelike;
use regex::Regex;

use crate::corpus::NewsArticle;
use crate::lexicons::{self, SentimentLexicon};
use crate::text;

pub const POLARITY_NAMES: [&str; 11] = [
    "polarity",
    "positive_rate",
    "negative_rate",
    "positive_nonneutral_rate",
    "negative_nonneutral_rate",
    "avg_positive_polarity",
    "avg_negative_polarity",
    "min_positive_polarity",
    "max_positive_polarity",
    "min_negative_polarity",
    "max_negative_polarity",
];

/// Polarity statistics of a text. Rates are per 100 words; the
/// non-neutral rates are fractions of the polar words.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PolarityStats {
    pub polarity: f64,
    pub positive_rate: f64,
    pub negative_rate: f64,
    pub positive_nonneutral_rate: f64,
    pub negative_nonneutral_rate: f64,
    pub avg_positive_polarity: f64,
    pub avg_negative_polarity: f64,
    pub min_positive_polarity: f64,
    pub max_positive_polarity: f64,
    pub min_negative_polarity: f64,
    pub max_negative_polarity: f64,
}

impl PolarityStats {
    pub fn values(&self) -> [f64; 11] {
        [
            self.polarity,
            self.positive_rate,
            self.negative_rate,
            self.positive_nonneutral_rate,
            self.negative_nonneutral_rate,
            self.avg_positive_polarity,
            self.avg_negative_polarity,
            self.min_positive_polarity,
            self.max_positive_polarity,
            self.min_negative_polarity,
            self.max_negative_polarity,
        ]
    }
}

fn mean_min_max(xs: &[f64]) -> (f64, f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mean, min, max)
}

pub fn polarity_stats(text: &str, lex: &SentimentLexicon) -> PolarityStats {
    let words = text::words(text);
    if words.is_empty() {
        return PolarityStats::default();
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for w in &words {
        match lex.word_valence(w) {
            Some(v) if v > 0.0 => pos.push(v),
            Some(v) if v < 0.0 => neg.push(v),
            _ => {}
        }
    }
    let n = words.len() as f64;
    let polar = (pos.len() + neg.len()) as f64;
    let (avg_pos, min_pos, max_pos) = mean_min_max(&pos);
    let (avg_neg, min_neg, max_neg) = mean_min_max(&neg);
    PolarityStats {
        polarity: lexicons::score_sentiment(text, lex),
        positive_rate: 100.0 * pos.len() as f64 / n,
        negative_rate: 100.0 * neg.len() as f64 / n,
        positive_nonneutral_rate: if polar > 0.0 { pos.len() as f64 / polar } else { 0.0 },
        negative_nonneutral_rate: if polar > 0.0 { neg.len() as f64 / polar } else { 0.0 },
        avg_positive_polarity: avg_pos,
        avg_negative_polarity: avg_neg,
        min_positive_polarity: min_pos,
        max_positive_polarity: max_pos,
        min_negative_polarity: min_neg,
        max_negative_polarity: max_neg,
    }
}

/// Word count, non-stop-word rate, entity count and mean word length.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ContentStats {
    pub word_count: f64,
    pub nonstop_rate: f64,
    pub entity_count: f64,
    pub avg_word_length: f64,
}

pub fn content_stats(text: &str) -> ContentStats {
    let words = text::words(text);
    if words.is_empty() {
        return ContentStats::default();
    }
    let sw = text::stopwords();
    let n = words.len() as f64;
    let nonstop = words.iter().filter(|w| !sw.contains(&w.to_lowercase())).count() as f64;
    let chars: usize = words.iter().map(|w| w.chars().count()).sum();
    ContentStats {
        word_count: n,
        nonstop_rate: nonstop / n,
        entity_count: entity_mentions(text).len() as f64,
        avg_word_length: chars as f64 / n,
    }
}

fn sentence_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[.!?]+(?:\s+|$)|\n").expect("valid sentence regex"))
}

fn is_capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

/// Entity mentions found by capitalisation: maximal runs of capitalised
/// non-stop-word tokens. A sentence-initial token only qualifies if the
/// same token also appears capitalised mid-sentence somewhere in the text.
/// Mentions are returned in text order, words joined by a space.
pub fn entity_mentions(text: &str) -> Vec<String> {
    let sw = text::stopwords();
    let sentences: Vec<Vec<&str>> = sentence_regex()
        .split(text)
        .map(text::words)
        .filter(|s| !s.is_empty())
        .collect();
    let qualifies = |w: &str| is_capitalized(w) && !sw.contains(&w.to_lowercase());
    let mid: HashSet<&str> = sentences
        .iter()
        .flat_map(|s| s.iter().skip(1))
        .copied()
        .filter(|w| qualifies(w))
        .collect();

    let mut out = Vec::new();
    for s in &sentences {
        let mut run: Vec<&str> = Vec::new();
        for (i, &w) in s.iter().enumerate() {
            if qualifies(w) && (i > 0 || mid.contains(w)) {
                run.push(w);
            } else if !run.is_empty() {
                out.push(run.join(" "));
                run.clear();
            }
        }
        if !run.is_empty() {
            out.push(run.join(" "));
        }
    }
    out
}

/// Monday = 0 .. Sunday = 6.
pub fn day_of_week(article: &NewsArticle) -> u32 {
    article.published_at.weekday().num_days_from_monday()
}
