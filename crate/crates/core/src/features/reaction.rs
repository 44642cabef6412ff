//! Reaction indices: sentiment variance (SV) and emotion variance (EV)
//! over an article's associated tweets.

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Tweet};
use crate::lexicons::{self, EmotionCounts, Lexicons, Polarity};
use crate::relevance::ArticleAssociation;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ReactionIndices {
    pub sentiment_variance: f64,
    pub emotion_variance: f64,
    pub positive_count: u64,
    pub negative_count: u64,
    /// Tweets per dominant emotion; tweets without one are not counted.
    pub emotion_counts: EmotionCounts,
    /// All associated tweets, including neutral and emotion-less ones.
    pub tweet_total: u64,
}

/// `1 - |PC - NC| / (PC + NC)`, or 0 when there are no polar tweets.
///
/// Evaluated as the equivalent `2 min(PC, NC) / (PC + NC)`, which is a
/// single correctly rounded division.
pub fn sentiment_variance(positive: u64, negative: u64) -> f64 {
    let total = positive + negative;
    if total == 0 {
        return 0.0;
    }
    (2 * positive.min(negative)) as f64 / total as f64
}

/// Population variance of the eight category counts around their mean
/// `N / 8`. Exact for counts below 2^20.
pub fn emotion_variance(counts: &EmotionCounts) -> f64 {
    let n: u64 = counts.iter().sum();
    let mean = n as f64 / 8.0;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / 8.0
}

/// Per-tweet reaction labels.
pub fn classify_tweet(tweet: &Tweet, lex: &Lexicons) -> (Polarity, Option<lexicons::Emotion>) {
    let compound = lexicons::score_sentiment(&tweet.text, &lex.sentiment);
    let polarity = lexicons::classify_sentiment(compound).polarity;
    let hits = lexicons::tag_emotions(&tweet.text, &lex.emotion);
    (polarity, lexicons::dominant_emotion(&hits))
}

pub fn reaction_indices(assoc: &ArticleAssociation, corpus: &Corpus, lex: &Lexicons) -> ReactionIndices {
    reaction_from_tweets(assoc.tweets(corpus), lex)
}

pub fn reaction_from_tweets<'a>(tweets: impl IntoIterator<Item = &'a Tweet>, lex: &Lexicons) -> ReactionIndices {
    let mut r = ReactionIndices::default();
    for t in tweets {
        r.tweet_total += 1;
        let (polarity, emotion) = classify_tweet(t, lex);
        match polarity {
            Polarity::Positive => r.positive_count += 1,
            Polarity::Negative => r.negative_count += 1,
            Polarity::Neutral => {}
        }
        if let Some(e) = emotion {
            r.emotion_counts[e.index()] += 1;
        }
    }
    r.sentiment_variance = sentiment_variance(r.positive_count, r.negative_count);
    r.emotion_variance = emotion_variance(&r.emotion_counts);
    r
}
