//! Lexicon-driven sentiment scoring and word-emotion tagging.
//!
//! Sentiment follows the VADER rule family: per-token valence, negation
//! and booster words in a three-token look-back window, an ALL-CAPS
//! emphasis bump, and the `S / sqrt(S² + 15)` squashing of the summed
//! valence into a compound score in `(-1, 1)`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text;

const BUNDLED_SENTIMENT: &str = include_str!("../data/sentiment_lexicon.tsv");
const BUNDLED_EMOTION: &str = include_str!("../data/emotion_lexicon.tsv");

/// Multiplier applied to a valence preceded by a negator.
pub const NEGATION_SCALAR: f64 = -0.74;
/// Emphasis added (toward the valence sign) for an ALL-CAPS token.
pub const CAPS_INCREMENT: f64 = 0.733;
/// Normalisation constant in `S / sqrt(S² + ALPHA)`.
pub const ALPHA: f64 = 15.0;
/// How many preceding tokens negators and boosters reach.
pub const MODIFIER_WINDOW: usize = 3;
/// Compound threshold for a positive or negative label (inclusive).
pub const POLARITY_THRESHOLD: f64 = 0.05;

const BOOSTER_UP: f64 = 0.293;
const BOOSTER_DOWN: f64 = -0.293;

const DEFAULT_NEGATORS: &[&str] = &[
    "not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere", "cannot",
    "without", "ain't", "aren't", "can't", "couldn't", "didn't", "doesn't", "don't", "hadn't",
    "hasn't", "haven't", "isn't", "mightn't", "mustn't", "needn't", "shan't", "shouldn't",
    "wasn't", "weren't", "won't", "wouldn't", "rarely", "seldom", "despite",
];

const DEFAULT_BOOSTERS: &[(&str, f64)] = &[
    ("absolutely", BOOSTER_UP),
    ("amazingly", BOOSTER_UP),
    ("completely", BOOSTER_UP),
    ("deeply", BOOSTER_UP),
    ("enormously", BOOSTER_UP),
    ("entirely", BOOSTER_UP),
    ("especially", BOOSTER_UP),
    ("exceptionally", BOOSTER_UP),
    ("extremely", BOOSTER_UP),
    ("greatly", BOOSTER_UP),
    ("highly", BOOSTER_UP),
    ("hugely", BOOSTER_UP),
    ("incredibly", BOOSTER_UP),
    ("most", BOOSTER_UP),
    ("particularly", BOOSTER_UP),
    ("purely", BOOSTER_UP),
    ("quite", BOOSTER_UP),
    ("really", BOOSTER_UP),
    ("remarkably", BOOSTER_UP),
    ("so", BOOSTER_UP),
    ("strongly", BOOSTER_UP),
    ("totally", BOOSTER_UP),
    ("tremendously", BOOSTER_UP),
    ("truly", BOOSTER_UP),
    ("utterly", BOOSTER_UP),
    ("very", BOOSTER_UP),
    ("almost", BOOSTER_DOWN),
    ("barely", BOOSTER_DOWN),
    ("hardly", BOOSTER_DOWN),
    ("less", BOOSTER_DOWN),
    ("little", BOOSTER_DOWN),
    ("marginally", BOOSTER_DOWN),
    ("occasionally", BOOSTER_DOWN),
    ("partly", BOOSTER_DOWN),
    ("scarcely", BOOSTER_DOWN),
    ("slightly", BOOSTER_DOWN),
    ("somewhat", BOOSTER_DOWN),
];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("valence {value} for {token:?} outside [-4, 4]")]
    ValenceOutOfRange { token: String, value: f64 },
}

fn read(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn data_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

// ---------------------------------------------------------------------------
// sentiment

#[derive(Debug, Clone, PartialEq)]
pub struct SentimentLexicon {
    entries: HashMap<String, f64>,
    negators: HashSet<String>,
    boosters: HashMap<String, f64>,
}

impl SentimentLexicon {
    pub fn new(
        entries: HashMap<String, f64>,
        negators: HashSet<String>,
        boosters: HashMap<String, f64>,
    ) -> Result<Self, LexiconError> {
        for (token, &value) in &entries {
            if !(-4.0..=4.0).contains(&value) {
                return Err(LexiconError::ValenceOutOfRange {
                    token: token.clone(),
                    value,
                });
            }
        }
        Ok(SentimentLexicon {
            entries,
            negators,
            boosters,
        })
    }

    /// Entries only; negators and boosters start empty.
    pub fn from_entries(entries: HashMap<String, f64>) -> Result<Self, LexiconError> {
        Self::new(entries, HashSet::new(), HashMap::new())
    }

    /// Parse `token<TAB>valence` lines (extra columns ignored) and attach the
    /// default negator and booster lists.
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (line, l) in data_lines(src) {
            let mut cols = l.split('\t');
            let token = cols.next().unwrap_or("").trim().to_lowercase();
            let raw = cols.next().ok_or_else(|| LexiconError::Parse {
                line,
                message: "expected token<TAB>valence".into(),
            })?;
            let value: f64 = raw.trim().parse().map_err(|_| LexiconError::Parse {
                line,
                message: format!("bad valence {raw:?}"),
            })?;
            if token.is_empty() {
                return Err(LexiconError::Parse {
                    line,
                    message: "empty token".into(),
                });
            }
            entries.insert(token, value);
        }
        let lex = Self::from_entries(entries)?;
        Ok(lex.with_default_modifiers())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::parse(&read(path.as_ref())?)
    }

    /// The small lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_SENTIMENT).expect("bundled sentiment lexicon parses")
    }

    pub fn with_default_modifiers(mut self) -> Self {
        self.negators = DEFAULT_NEGATORS.iter().map(|s| s.to_string()).collect();
        self.boosters = DEFAULT_BOOSTERS
            .iter()
            .map(|&(w, inc)| (w.to_string(), inc))
            .collect();
        self
    }

    pub fn with_negators<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.negators = it.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_boosters<I: IntoIterator<Item = (S, f64)>, S: Into<String>>(mut self, it: I) -> Self {
        self.boosters = it.into_iter().map(|(w, v)| (w.into(), v)).collect();
        self
    }

    /// Same lexicon with every valence passed through `f`.
    pub fn map_valences(&self, f: impl Fn(f64) -> f64) -> Self {
        SentimentLexicon {
            entries: self.entries.iter().map(|(k, &v)| (k.clone(), f(v))).collect(),
            negators: self.negators.clone(),
            boosters: self.boosters.clone(),
        }
    }

    /// Valence of a lowercased token.
    pub fn valence(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn is_negator(&self, token: &str) -> bool {
        self.negators.contains(token)
    }

    pub fn booster(&self, token: &str) -> Option<f64> {
        self.boosters.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lexicon valence of a word as it appears in text, ignoring
    /// modifiers. Negators and boosters carry no valence of their own.
    pub fn word_valence(&self, word: &str) -> Option<f64> {
        let lower = word.to_lowercase();
        if self.is_negator(&lower) || self.booster(&lower).is_some() {
            return None;
        }
        self.valence(&lower)
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn is_all_caps(token: &str) -> bool {
    token.chars().any(char::is_alphabetic) && !token.chars().any(char::is_lowercase)
}

/// Map a summed valence into `(-1, 1)`.
pub fn normalize_score(sum: f64) -> f64 {
    let c = sum / (sum * sum + ALPHA).sqrt();
    // only reachable for astronomically large sums
    c.clamp(-1.0 + f64::EPSILON, 1.0 - f64::EPSILON)
}

/// Sum of modifier-adjusted valences for `text`.
pub fn valence_sum(text: &str, lex: &SentimentLexicon) -> f64 {
    let tokens = text::words(text);
    let lower: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut sum = 0.0;
    for (i, word) in lower.iter().enumerate() {
        if lex.is_negator(word) || lex.booster(word).is_some() {
            continue;
        }
        let Some(mut v) = lex.valence(word) else {
            continue;
        };
        let s = sign(v);
        if is_all_caps(tokens[i]) {
            v += s * CAPS_INCREMENT;
        }
        let window = &lower[i.saturating_sub(MODIFIER_WINDOW)..i];
        for prev in window {
            if let Some(inc) = lex.booster(prev) {
                v += s * inc;
            }
        }
        if window.iter().any(|prev| lex.is_negator(prev)) {
            v *= NEGATION_SCALAR;
        }
        sum += v;
    }
    sum
}

/// Compound sentiment of `text` in `(-1, 1)`; 0 when no lexicon word occurs.
pub fn score_sentiment(text: &str, lex: &SentimentLexicon) -> f64 {
    normalize_score(valence_sum(text, lex))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentLabel {
    pub polarity: Polarity,
    pub compound: f64,
}

pub fn classify_sentiment(compound: f64) -> SentimentLabel {
    let polarity = if compound >= POLARITY_THRESHOLD {
        Polarity::Positive
    } else if compound <= -POLARITY_THRESHOLD {
        Polarity::Negative
    } else {
        Polarity::Neutral
    };
    SentimentLabel { polarity, compound }
}

// ---------------------------------------------------------------------------
// emotion

/// The eight word-emotion categories, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
}

impl Emotion {
    pub const ALL: [Emotion; 8] = [
        Emotion::Anger,
        Emotion::Anticipation,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Joy,
        Emotion::Sadness,
        Emotion::Surprise,
        Emotion::Trust,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
            Emotion::Trust => "trust",
        }
    }

    pub fn from_name(name: &str) -> Option<Emotion> {
        Emotion::ALL.into_iter().find(|e| e.name() == name)
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-category hit counts, indexed by [`Emotion::index`].
pub type EmotionCounts = [u64; 8];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmotionLexicon {
    // bit i set => token associated with Emotion::ALL[i]
    entries: HashMap<String, u8>,
}

impl EmotionLexicon {
    pub fn from_entries<I, S>(it: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<Emotion>)>,
        S: Into<String>,
    {
        let entries = it
            .into_iter()
            .filter_map(|(tok, emos)| {
                let mask = emos.iter().fold(0u8, |m, e| m | (1 << e.index()));
                (mask != 0).then(|| (tok.into().to_lowercase(), mask))
            })
            .collect();
        EmotionLexicon { entries }
    }

    /// Parse `token<TAB>category<TAB>flag` lines. Categories outside the
    /// eight emotions (e.g. `positive`, `negative`) are skipped.
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut entries: HashMap<String, u8> = HashMap::new();
        for (line, l) in data_lines(src) {
            let cols: Vec<&str> = l.split('\t').map(str::trim).collect();
            let [token, category, flag] = cols[..] else {
                return Err(LexiconError::Parse {
                    line,
                    message: "expected token<TAB>category<TAB>flag".into(),
                });
            };
            let on = match flag {
                "1" => true,
                "0" => false,
                other => {
                    return Err(LexiconError::Parse {
                        line,
                        message: format!("flag must be 0 or 1, got {other:?}"),
                    })
                }
            };
            if let (true, Some(e)) = (on, Emotion::from_name(&category.to_lowercase())) {
                *entries.entry(token.to_lowercase()).or_default() |= 1 << e.index();
            }
        }
        Ok(EmotionLexicon { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::parse(&read(path.as_ref())?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_EMOTION).expect("bundled emotion lexicon parses")
    }

    pub fn emotions(&self, token: &str) -> impl Iterator<Item = Emotion> + '_ {
        let mask = self.entries.get(token).copied().unwrap_or(0);
        Emotion::ALL
            .into_iter()
            .filter(move |e| mask & (1 << e.index()) != 0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Count, per category, the tokens of `text` associated with it.
pub fn tag_emotions(text: &str, lex: &EmotionLexicon) -> EmotionCounts {
    let mut counts = [0u64; 8];
    for w in text::words(text) {
        for e in lex.emotions(&w.to_lowercase()) {
            counts[e.index()] += 1;
        }
    }
    counts
}

/// Category with the most hits; ties go to the earlier category.
pub fn dominant_emotion(hits: &EmotionCounts) -> Option<Emotion> {
    let mut best: Option<(Emotion, u64)> = None;
    for e in Emotion::ALL {
        let c = hits[e.index()];
        if c > 0 && best.is_none_or(|(_, b)| c > b) {
            best = Some((e, c));
        }
    }
    best.map(|(e, _)| e)
}

/// Both lexicons used by the reaction indices and polarity baselines.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub sentiment: SentimentLexicon,
    pub emotion: EmotionLexicon,
}

impl Lexicons {
    pub fn bundled() -> Self {
        Lexicons {
            sentiment: SentimentLexicon::bundled(),
            emotion: EmotionLexicon::bundled(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex(entries: &[(&str, f64)]) -> SentimentLexicon {
        SentimentLexicon::from_entries(entries.iter().map(|&(k, v)| (k.to_string(), v)).collect())
            .unwrap()
            .with_default_modifiers()
    }

    #[test]
    fn empty_text_scores_zero() {
        assert_eq!(score_sentiment("", &SentimentLexicon::bundled()), 0.0);
    }

    #[test]
    fn single_token_normalisation() {
        let l = lex(&[("fine", 2.0)]);
        let c = score_sentiment("fine", &l);
        // 2 / sqrt(19)
        assert!((c - 0.458831).abs() < 1e-6, "{c}");
    }

    #[test]
    fn negation_flips_and_damps() {
        let l = lex(&[("good", 1.9)]);
        assert!((valence_sum("not good", &l) - (-1.406)).abs() < 1e-12);
        let c = score_sentiment("not good", &l);
        assert!((c - (-0.341237)).abs() < 1e-6, "{c}");
        // negator outside the three-token window has no effect
        assert!(valence_sum("not a b c good", &l) > 0.0);
        assert!(valence_sum("not a b good", &l) < 0.0);
    }

    #[test]
    fn booster_and_caps_push_toward_sign() {
        let l = lex(&[("good", 1.9), ("bad", -2.5)]);
        assert!((valence_sum("very good", &l) - (1.9 + 0.293)).abs() < 1e-12);
        assert!((valence_sum("very bad", &l) - (-2.5 - 0.293)).abs() < 1e-12);
        assert!((valence_sum("slightly bad", &l) - (-2.5 + 0.293)).abs() < 1e-12);
        assert!((valence_sum("GOOD", &l) - (1.9 + 0.733)).abs() < 1e-12);
        assert!((valence_sum("BAD", &l) - (-2.5 - 0.733)).abs() < 1e-12);
        // booster, then negation of the boosted value
        assert!((valence_sum("not very good", &l) - (1.9 + 0.293) * -0.74).abs() < 1e-12);
    }

    #[test]
    fn negator_entries_carry_no_valence() {
        let l = lex(&[("no", -1.2), ("good", 1.9)]);
        assert_eq!(valence_sum("no", &l), 0.0);
    }

    #[test]
    fn sentiment_thresholds() {
        assert_eq!(classify_sentiment(0.0).polarity, Polarity::Neutral);
        assert_eq!(classify_sentiment(0.05).polarity, Polarity::Positive);
        assert_eq!(classify_sentiment(-0.05).polarity, Polarity::Negative);
        assert_eq!(classify_sentiment(0.0499).polarity, Polarity::Neutral);
        assert_eq!(classify_sentiment(-0.3412).polarity, Polarity::Negative);
    }

    #[test]
    fn lexicon_parsing() {
        let l = SentimentLexicon::parse("# c\ngood\t1.9\t0.9\t[2, 2]\nbad\t-2.5\n").unwrap();
        assert_eq!(l.valence("good"), Some(1.9));
        assert_eq!(l.valence("bad"), Some(-2.5));
        assert!(matches!(
            SentimentLexicon::parse("huge\t5.0").unwrap_err(),
            LexiconError::ValenceOutOfRange { .. }
        ));
        assert!(matches!(
            SentimentLexicon::parse("lonely").unwrap_err(),
            LexiconError::Parse { line: 1, .. }
        ));
        assert!(SentimentLexicon::bundled().len() > 100);
    }

    #[test]
    fn emotion_lexicon_parsing() {
        let l = EmotionLexicon::parse("rage\tanger\t1\nrage\tdisgust\t1\nrage\tjoy\t0\nrage\tnegative\t1\n")
            .unwrap();
        assert_eq!(l.emotions("rage").collect::<Vec<_>>(), vec![Emotion::Anger, Emotion::Disgust]);
        assert!(EmotionLexicon::parse("x\tanger\t2").is_err());
        assert!(EmotionLexicon::parse("x\tanger").is_err());
        // zero-flag-only tokens are not entries
        assert!(EmotionLexicon::parse("calm\tjoy\t0").unwrap().is_empty());
    }

    #[test]
    fn emotion_tagging() {
        let l = EmotionLexicon::from_entries([("rage", vec![Emotion::Anger, Emotion::Disgust])]);
        assert_eq!(tag_emotions("nothing here", &l), [0; 8]);
        assert_eq!(tag_emotions("Rage", &l), [1, 0, 1, 0, 0, 0, 0, 0]);

        // five-entry toy lexicon, three-token sentence, tallied by hand:
        // war -> anger, fear, sadness; hope -> anticipation, joy, trust;
        // fear -> fear
        let toy = EmotionLexicon::from_entries([
            ("war", vec![Emotion::Anger, Emotion::Fear, Emotion::Sadness]),
            ("hope", vec![Emotion::Anticipation, Emotion::Joy, Emotion::Trust]),
            ("fear", vec![Emotion::Fear]),
            ("gift", vec![Emotion::Surprise, Emotion::Joy]),
            ("rot", vec![Emotion::Disgust]),
        ]);
        assert_eq!(tag_emotions("war hope fear", &toy), [1, 1, 0, 2, 1, 1, 0, 1]);
    }

    #[test]
    fn dominant_emotion_rules() {
        assert_eq!(dominant_emotion(&[2, 0, 0, 0, 0, 0, 0, 0]), Some(Emotion::Anger));
        assert_eq!(dominant_emotion(&[1, 1, 0, 0, 0, 0, 0, 0]), Some(Emotion::Anger));
        assert_eq!(dominant_emotion(&[0, 1, 0, 0, 0, 0, 0, 3]), Some(Emotion::Trust));
        assert_eq!(dominant_emotion(&[0; 8]), None);
    }

    fn vocab() -> Vec<&'static str> {
        vec![
            "good", "bad", "great", "awful", "not", "never", "very", "slightly", "GOOD", "BAD",
            "news", "vote", "the", "LOVE", "hate", "don't", "win", "fraud", "so", "ok",
        ]
    }

    proptest! {
        #[test]
        fn compound_is_bounded(text in ".{0,200}") {
            let c = score_sentiment(&text, &SentimentLexicon::bundled());
            prop_assert!(c > -1.0 && c < 1.0);
        }

        #[test]
        fn valence_sign_symmetry(idx in proptest::collection::vec(0usize..20, 0..25)) {
            let v = vocab();
            let text = idx.iter().map(|&i| v[i]).collect::<Vec<_>>().join(" ");
            let l = SentimentLexicon::bundled();
            let flipped = l.map_valences(|x| -x);
            prop_assert_eq!(score_sentiment(&text, &flipped), -score_sentiment(&text, &l));
        }

        #[test]
        fn emotion_counts_ignore_order(idx in proptest::collection::vec(0usize..20, 0..25), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let v = vocab();
            let mut toks: Vec<&str> = idx.iter().map(|&i| v[i]).collect();
            let l = EmotionLexicon::bundled();
            let before = tag_emotions(&toks.join(" "), &l);
            toks.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(tag_emotions(&toks.join(" "), &l), before);
        }
    }
}
