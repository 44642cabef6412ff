//! Involvement indices: how much, and by whom, an article is tweeted about.

use std::collections::BTreeMap;

use chrono::Duration;
use serde::{Deserialize, Serialize};

use super::FeatureParams;
use crate::corpus::Corpus;
use crate::relevance::ArticleAssociation;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InvolvementIndices {
    pub tweet_count_norm: f64,
    pub avg_retweets: f64,
    pub avg_favorites: f64,
    pub affected_user_fraction: f64,
    pub influential_user_fraction: f64,
    pub authoritative_user_fraction: f64,
    pub article_specific_hashtag_count: u64,
}

/// Largest associated tweet count across `associations`.
pub fn corpus_max_tweets<'a>(associations: impl IntoIterator<Item = &'a ArticleAssociation>) -> usize {
    associations
        .into_iter()
        .map(|a| a.expanded_tweet_ids.len())
        .max()
        .unwrap_or(0)
}

/// User fractions are over all unique authors, including authors without a
/// profile; those never count as influential or authoritative.
pub fn involvement_indices(
    assoc: &ArticleAssociation,
    corpus: &Corpus,
    corpus_max_tweets: usize,
    params: &FeatureParams,
) -> InvolvementIndices {
    let tweets: Vec<_> = assoc.tweets(corpus).collect();
    if tweets.is_empty() {
        return InvolvementIndices::default();
    }
    let n = tweets.len() as f64;
    let retweets: u64 = tweets.iter().map(|t| t.retweet_count).sum();
    let favorites: u64 = tweets.iter().map(|t| t.favorite_count).sum();

    let mut per_user: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &tweets {
        *per_user.entry(t.user_id.as_str()).or_default() += 1;
    }
    let users = per_user.len() as f64;
    let affected = per_user.values().filter(|&&c| c >= 2).count() as f64;

    let active_since = corpus
        .article(&assoc.article_id)
        .map(|a| a.published_at - Duration::days(params.active_window_days));
    let mut influential = 0usize;
    let mut authoritative = 0usize;
    for u in per_user.keys().filter_map(|id| corpus.user(id)) {
        let active = active_since.is_some_and(|since| u.last_active_at >= since);
        if u.followers_count > params.influential_followers && active {
            influential += 1;
        }
        if u.verified {
            authoritative += 1;
        }
    }

    InvolvementIndices {
        tweet_count_norm: n / corpus_max_tweets.max(tweets.len()) as f64,
        avg_retweets: retweets as f64 / n,
        avg_favorites: favorites as f64 / n,
        affected_user_fraction: affected / users,
        influential_user_fraction: influential as f64 / users,
        authoritative_user_fraction: authoritative as f64 / users,
        article_specific_hashtag_count: assoc.article_specific_hashtags.len() as u64,
    }
}
