//! Tweet-to-article association.
//!
//! 1. Rank an article's terms by TF-IDF against the article collection and
//!    keep the top `k` as its keyword profile.
//! 2. Seed tweets are same-day tweets sharing at least `min_overlap` terms
//!    with the profile.
//! 3. Hashtags harvested from the current tweet set are labelled generic
//!    (attached to many recent articles, or heavily used in the preceding
//!    month) or article-specific.
//! 4. Same-day tweets carrying an article-specific hashtag join the set;
//!    steps 3-4 repeat until nothing changes or the iteration bound is hit.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use chrono::{Days, NaiveDate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, NewsArticle, Tweet};
use crate::diagnostics::Diagnostic;
use crate::text;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelevanceError {
    #[error("article {article_id:?} has no indexable tokens")]
    NoIndexableTokens { article_id: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeywordSource {
    #[default]
    TitleBody,
    Title,
}

impl KeywordSource {
    fn document(self, a: &NewsArticle) -> String {
        match self {
            KeywordSource::TitleBody => format!("{}\n{}", a.title, a.body),
            KeywordSource::Title => a.title.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenericParams {
    /// A hashtag attached to at least this many history articles is generic.
    pub min_articles: usize,
    /// A hashtag whose history usage exceeds this quantile of all history
    /// hashtag usage counts is generic.
    pub quantile: f64,
}

impl Default for GenericParams {
    fn default() -> Self {
        GenericParams {
            min_articles: 5,
            quantile: 0.90,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelevanceParams {
    pub keywords: usize,
    pub keywords_source: KeywordSource,
    pub min_overlap: usize,
    pub generic: GenericParams,
    pub max_iterations: u32,
    pub history_days: u64,
}

impl Default for RelevanceParams {
    fn default() -> Self {
        RelevanceParams {
            keywords: 10,
            keywords_source: KeywordSource::TitleBody,
            min_overlap: 3,
            generic: GenericParams::default(),
            max_iterations: 3,
            history_days: 30,
        }
    }
}

// ---------------------------------------------------------------------------
// keywords

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordProfile {
    pub article_id: String,
    /// (term, tf-idf) with non-increasing scores.
    pub keywords: Vec<(String, f64)>,
}

impl KeywordProfile {
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(|(t, _)| t.as_str())
    }
}

/// Document frequencies over a background collection.
#[derive(Debug, Clone)]
pub struct DocumentFrequencies {
    ids: HashSet<String>,
    df: HashMap<String, usize>,
    source: KeywordSource,
}

impl DocumentFrequencies {
    pub fn new(background: &[NewsArticle], source: KeywordSource) -> Self {
        let mut df: HashMap<String, usize> = HashMap::new();
        let mut ids = HashSet::new();
        for a in background {
            if !ids.insert(a.id.clone()) {
                continue;
            }
            let distinct: HashSet<String> = text::terms(&source.document(a)).into_iter().collect();
            for t in distinct {
                *df.entry(t).or_default() += 1;
            }
        }
        DocumentFrequencies { ids, df, source }
    }

    /// Top-`k` terms of `article` by TF·IDF with `TF = count / n_terms` and
    /// `IDF = ln(1 + D / df)`. An article outside the background is counted
    /// as one extra document.
    pub fn keywords(&self, article: &NewsArticle, k: usize) -> Result<KeywordProfile, RelevanceError> {
        let terms = text::terms(&self.source.document(article));
        if terms.is_empty() {
            return Err(RelevanceError::NoIndexableTokens {
                article_id: article.id.clone(),
            });
        }
        let outside = usize::from(!self.ids.contains(&article.id));
        let docs = (self.ids.len() + outside) as f64;

        let mut counts: HashMap<&str, usize> = HashMap::new();
        for t in &terms {
            *counts.entry(t.as_str()).or_default() += 1;
        }
        let n = terms.len() as f64;
        let mut scored: Vec<(String, f64)> = counts
            .into_iter()
            .map(|(t, c)| {
                let df = self.df.get(t).copied().unwrap_or(0) + outside;
                let idf = (1.0 + docs / df as f64).ln();
                (t.to_string(), c as f64 / n * idf)
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        scored.truncate(k);
        Ok(KeywordProfile {
            article_id: article.id.clone(),
            keywords: scored,
        })
    }
}

/// Convenience wrapper building document frequencies on the fly.
pub fn tfidf_keywords(
    article: &NewsArticle,
    background: &[NewsArticle],
    k: usize,
    source: KeywordSource,
) -> Result<KeywordProfile, RelevanceError> {
    assert!(k >= 1, "k must be at least 1");
    DocumentFrequencies::new(background, source).keywords(article, k)
}

/// Ids of tweets sharing at least `min_overlap` terms with the profile.
pub fn seed_tweets<'a>(
    profile: &KeywordProfile,
    tweets: impl IntoIterator<Item = &'a Tweet>,
    min_overlap: usize,
) -> BTreeSet<String> {
    let keywords: HashSet<&str> = profile.terms().collect();
    tweets
        .into_iter()
        .filter(|t| {
            let terms: HashSet<String> = text::terms(&t.text).into_iter().collect();
            terms.iter().filter(|x| keywords.contains(x.as_str())).count() >= min_overlap
        })
        .map(|t| t.id.clone())
        .collect()
}

// ---------------------------------------------------------------------------
// hashtag labelling

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HashtagKind {
    Generic,
    ArticleSpecific,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashtagLabel {
    pub hashtag: String,
    pub label: HashtagKind,
    /// Present iff the label is article-specific.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub article_id: Option<String>,
}

/// Hashtag usage in the window preceding an article.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HashtagHistory {
    /// Hashtags of each history article's seed tweets.
    pub article_hashtags: BTreeMap<String, BTreeSet<String>>,
    /// Number of window tweets carrying each hashtag.
    pub usage: BTreeMap<String, u64>,
}

impl HashtagHistory {
    pub fn is_empty(&self) -> bool {
        self.usage.is_empty() && self.article_hashtags.values().all(BTreeSet::is_empty)
    }

    pub fn articles_using(&self, hashtag: &str) -> usize {
        self.article_hashtags
            .values()
            .filter(|tags| tags.contains(hashtag))
            .count()
    }

    /// Linearly interpolated `q`-quantile of the usage counts.
    pub fn usage_quantile(&self, q: f64) -> Option<f64> {
        let mut counts: Vec<u64> = self.usage.values().copied().collect();
        if counts.is_empty() {
            return None;
        }
        counts.sort_unstable();
        let pos = q.clamp(0.0, 1.0) * (counts.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        Some(counts[lo] as f64 + frac * (counts[hi] as f64 - counts[lo] as f64))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub labels: Vec<HashtagLabel>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Classification {
    pub fn of_kind(&self, kind: HashtagKind) -> BTreeSet<String> {
        self.labels
            .iter()
            .filter(|l| l.label == kind)
            .map(|l| l.hashtag.clone())
            .collect()
    }
}

/// Label each candidate for `article_id`. Labels come back in hashtag order.
pub fn classify_hashtags<'a>(
    article_id: &str,
    candidates: impl IntoIterator<Item = &'a str>,
    history: &HashtagHistory,
    params: &GenericParams,
) -> Classification {
    let candidates: BTreeSet<&str> = candidates.into_iter().collect();
    let mut diagnostics = Vec::new();
    if history.is_empty() {
        diagnostics.push(Diagnostic::EmptyHashtagHistory {
            article_id: article_id.to_string(),
        });
    }
    let threshold = history.usage_quantile(params.quantile);
    let labels = candidates
        .into_iter()
        .map(|h| {
            let by_articles = history.articles_using(h) >= params.min_articles.max(1);
            let usage = history.usage.get(h).copied().unwrap_or(0) as f64;
            let by_usage = threshold.is_some_and(|q| usage > q);
            if !history.is_empty() && (by_articles || by_usage) {
                HashtagLabel {
                    hashtag: h.to_string(),
                    label: HashtagKind::Generic,
                    article_id: None,
                }
            } else {
                HashtagLabel {
                    hashtag: h.to_string(),
                    label: HashtagKind::ArticleSpecific,
                    article_id: Some(article_id.to_string()),
                }
            }
        })
        .collect();
    Classification {
        labels,
        diagnostics,
    }
}

// ---------------------------------------------------------------------------
// expansion

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleAssociation {
    pub article_id: String,
    pub seed_tweet_ids: BTreeSet<String>,
    pub expanded_tweet_ids: BTreeSet<String>,
    pub article_specific_hashtags: BTreeSet<String>,
    pub generic_hashtags: BTreeSet<String>,
    /// Number of expansion rounds that added tweets.
    pub iterations_run: u32,
}

impl ArticleAssociation {
    pub fn empty(article_id: &str) -> Self {
        ArticleAssociation {
            article_id: article_id.to_string(),
            seed_tweet_ids: BTreeSet::new(),
            expanded_tweet_ids: BTreeSet::new(),
            article_specific_hashtags: BTreeSet::new(),
            generic_hashtags: BTreeSet::new(),
            iterations_run: 0,
        }
    }

    pub fn tweets<'c>(&'c self, corpus: &'c Corpus) -> impl Iterator<Item = &'c Tweet> + 'c {
        self.expanded_tweet_ids
            .iter()
            .filter_map(move |id| corpus.tweet(id))
    }
}

fn harvest<'a>(ids: &'a BTreeSet<String>, corpus: &'a Corpus) -> BTreeSet<&'a str> {
    ids.iter()
        .filter_map(|id| corpus.tweet(id))
        .flat_map(|t| t.hashtags.iter().map(String::as_str))
        .collect()
}

/// Grow `start` through article-specific hashtags until a fixpoint or
/// `params.max_iterations` productive rounds. `start` is reported as the
/// seed set.
pub fn expand_from_tweets(
    article: &NewsArticle,
    start: BTreeSet<String>,
    corpus: &Corpus,
    history: &HashtagHistory,
    params: &RelevanceParams,
) -> (ArticleAssociation, Vec<Diagnostic>) {
    if start.is_empty() {
        return (ArticleAssociation::empty(&article.id), Vec::new());
    }
    let day = article.day();
    let mut current = start.clone();
    let mut iterations_run = 0;
    for round in 1..=params.max_iterations {
        let specific = classify_hashtags(&article.id, harvest(&current, corpus), history, &params.generic)
            .of_kind(HashtagKind::ArticleSpecific);
        let mut next = current.clone();
        for h in &specific {
            next.extend(
                corpus
                    .tweets_with_hashtag(h)
                    .filter(|t| t.day() == day)
                    .map(|t| t.id.clone()),
            );
        }
        if next == current {
            break;
        }
        current = next;
        iterations_run = round;
    }
    let cls = classify_hashtags(&article.id, harvest(&current, corpus), history, &params.generic);
    let assoc = ArticleAssociation {
        article_id: article.id.clone(),
        seed_tweet_ids: start,
        article_specific_hashtags: cls.of_kind(HashtagKind::ArticleSpecific),
        generic_hashtags: cls.of_kind(HashtagKind::Generic),
        expanded_tweet_ids: current,
        iterations_run,
    };
    (assoc, cls.diagnostics)
}

/// Seed from same-day tweets, then expand.
pub fn expand_association(
    article: &NewsArticle,
    profile: &KeywordProfile,
    corpus: &Corpus,
    history: &HashtagHistory,
    params: &RelevanceParams,
) -> (ArticleAssociation, Vec<Diagnostic>) {
    let seeds = seed_tweets(profile, corpus.tweets_on(article.day()), params.min_overlap);
    expand_from_tweets(article, seeds, corpus, history, params)
}

/// Caches keyword profiles and seed sets for every article so histories
/// can be assembled cheaply.
pub struct Associator<'c> {
    corpus: &'c Corpus,
    params: RelevanceParams,
    profiles: BTreeMap<String, KeywordProfile>,
    seeds: BTreeMap<String, BTreeSet<String>>,
}

impl<'c> Associator<'c> {
    pub fn new(corpus: &'c Corpus, params: RelevanceParams) -> Self {
        let dfs = DocumentFrequencies::new(corpus.articles(), params.keywords_source);
        let profiles: BTreeMap<String, KeywordProfile> = corpus
            .articles()
            .par_iter()
            .filter_map(|a| dfs.keywords(a, params.keywords.max(1)).ok())
            .map(|p| (p.article_id.clone(), p))
            .collect();
        let seeds = corpus
            .articles()
            .par_iter()
            .map(|a| {
                let s = profiles
                    .get(&a.id)
                    .map(|p| seed_tweets(p, corpus.tweets_on(a.day()), params.min_overlap))
                    .unwrap_or_default();
                (a.id.clone(), s)
            })
            .collect();
        Associator {
            corpus,
            params,
            profiles,
            seeds,
        }
    }

    pub fn params(&self) -> &RelevanceParams {
        &self.params
    }

    pub fn profile(&self, article_id: &str) -> Option<&KeywordProfile> {
        self.profiles.get(article_id)
    }

    pub fn seeds(&self, article_id: &str) -> Option<&BTreeSet<String>> {
        self.seeds.get(article_id)
    }

    /// Articles published in the `history_days` days before `article`'s day
    /// and all tweets created in that window.
    pub fn history_for(&self, article: &NewsArticle) -> HashtagHistory {
        let day = article.day();
        let from = day
            .checked_sub_days(Days::new(self.params.history_days))
            .unwrap_or(NaiveDate::MIN);
        let article_hashtags = self
            .corpus
            .articles_between(from, day)
            .map(|a| {
                let tags = self
                    .seeds
                    .get(&a.id)
                    .map(|s| harvest(s, self.corpus).into_iter().map(str::to_string).collect())
                    .unwrap_or_default();
                (a.id.clone(), tags)
            })
            .collect();
        let mut usage: BTreeMap<String, u64> = BTreeMap::new();
        for t in self.corpus.tweets_between(from, day) {
            for h in &t.hashtags {
                *usage.entry(h.clone()).or_default() += 1;
            }
        }
        HashtagHistory {
            article_hashtags,
            usage,
        }
    }

    pub fn associate(&self, article: &NewsArticle) -> (ArticleAssociation, Vec<Diagnostic>) {
        let seeds = self.seeds.get(&article.id).cloned().unwrap_or_default();
        if seeds.is_empty() {
            return (ArticleAssociation::empty(&article.id), Vec::new());
        }
        let history = self.history_for(article);
        expand_from_tweets(article, seeds, self.corpus, &history, &self.params)
    }

    /// One association per article, in article id order.
    pub fn associate_all(&self) -> (Vec<ArticleAssociation>, Vec<Diagnostic>) {
        let results: Vec<_> = self
            .corpus
            .articles()
            .par_iter()
            .map(|a| self.associate(a))
            .collect();
        let mut assocs = Vec::with_capacity(results.len());
        let mut diags = Vec::new();
        for (a, d) in results {
            assocs.push(a);
            diags.extend(d);
        }
        (assocs, diags)
    }
}
