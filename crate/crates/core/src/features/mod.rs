//! Feature schemes and the labelled feature matrix.

pub mod baseline;
pub mod event;
pub mod involvement;
pub mod reaction;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, NewsArticle};
use crate::lexicons::Lexicons;
use crate::relevance::ArticleAssociation;

pub use involvement::{corpus_max_tweets, involvement_indices, InvolvementIndices};
pub use reaction::{emotion_variance, reaction_indices, sentiment_variance, ReactionIndices};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureParams {
    /// A user is active if last seen within this many days before the article.
    pub active_window_days: i64,
    /// Followers strictly above this make an active user influential.
    pub influential_followers: u64,
    /// Jaccard threshold for event similarity.
    pub event_threshold: f64,
    /// Append `authoritative_user_fraction` to the proposed scheme.
    pub authoritative: bool,
}

impl Default for FeatureParams {
    fn default() -> Self {
        FeatureParams {
            active_window_days: 30,
            influential_followers: 1000,
            event_threshold: 0.3,
            authoritative: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Proposed,
    ArticlePolarity,
    ArticleContentPolarity,
    TitlePolarity,
    TitleContentPolarity,
    EventImportance,
}

const PROPOSED: [&str; 8] = [
    "tweet_count_norm",
    "avg_retweets",
    "avg_favorites",
    "affected_user_fraction",
    "influential_user_fraction",
    "article_specific_hashtag_count",
    "sentiment_variance",
    "emotion_variance",
];

const ARTICLE_CONTENT: [&str; 6] = [
    "article_word_count",
    "article_nonstop_rate",
    "day_of_week",
    "is_weekend",
    "article_entity_count",
    "article_avg_word_length",
];

const TITLE_CONTENT: [&str; 4] = [
    "title_word_count",
    "title_nonstop_rate",
    "title_entity_count",
    "title_avg_word_length",
];

fn prefixed(prefix: &str) -> impl Iterator<Item = String> + '_ {
    baseline::POLARITY_NAMES.iter().map(move |n| format!("{prefix}_{n}"))
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Proposed,
        Scheme::ArticlePolarity,
        Scheme::ArticleContentPolarity,
        Scheme::TitlePolarity,
        Scheme::TitleContentPolarity,
        Scheme::EventImportance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Proposed => "proposed",
            Scheme::ArticlePolarity => "article_polarity",
            Scheme::ArticleContentPolarity => "article_content_polarity",
            Scheme::TitlePolarity => "title_polarity",
            Scheme::TitleContentPolarity => "title_content_polarity",
            Scheme::EventImportance => "event_importance",
        }
    }

    /// Only the proposed scheme reads tweets, users and associations.
    pub fn needs_tweets(self) -> bool {
        self == Scheme::Proposed
    }

    pub fn columns(self, params: &FeatureParams) -> Vec<String> {
        let own = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match self {
            Scheme::Proposed => {
                let mut c = own(&PROPOSED);
                if params.authoritative {
                    c.push("authoritative_user_fraction".into());
                }
                c
            }
            Scheme::ArticlePolarity => prefixed("article").collect(),
            Scheme::ArticleContentPolarity => {
                own(&ARTICLE_CONTENT).into_iter().chain(prefixed("article")).collect()
            }
            Scheme::TitlePolarity => prefixed("title").collect(),
            Scheme::TitleContentPolarity => {
                own(&TITLE_CONTENT).into_iter().chain(prefixed("title")).collect()
            }
            Scheme::EventImportance => own(&["event_days", "event_articles"]),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScheme(pub String);

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let valid: Vec<&str> = Scheme::ALL.iter().map(|s| s.name()).collect();
        write!(f, "unknown scheme `{}` (valid: {}, all)", self.0, valid.join(", "))
    }
}

impl std::error::Error for UnknownScheme {}

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

/// Parse a scheme name or `all`.
pub fn parse_schemes(s: &str) -> Result<Vec<Scheme>, UnknownScheme> {
    if s == "all" {
        Ok(Scheme::ALL.to_vec())
    } else {
        s.parse().map(|k| vec![k])
    }
}

/// One article's row. Values follow the owning matrix's column order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub article_id: String,
    pub scheme: Scheme,
    pub values: Vec<f64>,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub scheme: Scheme,
    pub columns: Vec<String>,
    pub rows: Vec<FeatureVector>,
}

impl FeatureMatrix {
    /// Name/value pairs of row `i`.
    pub fn named(&self, i: usize) -> BTreeMap<&str, f64> {
        self.columns
            .iter()
            .map(String::as_str)
            .zip(self.rows[i].values.iter().copied())
            .collect()
    }

    /// CSV with header `article_id,<features...>,label`; values with six
    /// decimals.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        let mut header = vec!["article_id".to_string()];
        header.extend(self.columns.iter().cloned());
        header.push("label".into());
        out.write_record(&header)?;
        for row in &self.rows {
            let mut rec = Vec::with_capacity(row.values.len() + 2);
            rec.push(row.article_id.clone());
            rec.extend(row.values.iter().map(|&v| format_value(v)));
            rec.push(row.label.to_string());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Six-decimal rendering; values that round to zero print unsigned.
pub fn format_value(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Shared, per-run precomputation for [`article_features`].
pub struct FeatureContext<'a> {
    pub corpus: &'a Corpus,
    pub lexicons: &'a Lexicons,
    pub params: &'a FeatureParams,
    associations: BTreeMap<&'a str, &'a ArticleAssociation>,
    max_tweets: usize,
    events: Option<Vec<(usize, usize)>>,
}

impl<'a> FeatureContext<'a> {
    pub fn new(
        corpus: &'a Corpus,
        associations: &'a [ArticleAssociation],
        lexicons: &'a Lexicons,
        params: &'a FeatureParams,
    ) -> Self {
        FeatureContext {
            corpus,
            lexicons,
            params,
            associations: associations.iter().map(|a| (a.article_id.as_str(), a)).collect(),
            max_tweets: corpus_max_tweets(associations),
            events: None,
        }
    }

    fn with_events(mut self) -> Self {
        let graph = event::EventGraph::new(self.corpus.articles(), self.params.event_threshold);
        self.events = Some(graph.cluster_stats());
        self
    }
}

/// Feature values of `corpus.articles()[index]` under `scheme`.
pub fn article_features(ctx: &FeatureContext<'_>, index: usize, scheme: Scheme) -> Vec<f64> {
    let article = &ctx.corpus.articles()[index];
    let lex = &ctx.lexicons.sentiment;
    match scheme {
        Scheme::Proposed => {
            let empty;
            let assoc = match ctx.associations.get(article.id.as_str()) {
                Some(a) => *a,
                None => {
                    empty = ArticleAssociation::empty(&article.id);
                    &empty
                }
            };
            let inv = involvement_indices(assoc, ctx.corpus, ctx.max_tweets, ctx.params);
            let react = reaction_indices(assoc, ctx.corpus, ctx.lexicons);
            let mut v = vec![
                inv.tweet_count_norm,
                inv.avg_retweets,
                inv.avg_favorites,
                inv.affected_user_fraction,
                inv.influential_user_fraction,
                inv.article_specific_hashtag_count as f64,
                react.sentiment_variance,
                react.emotion_variance,
            ];
            if ctx.params.authoritative {
                v.push(inv.authoritative_user_fraction);
            }
            v
        }
        Scheme::ArticlePolarity => baseline::polarity_stats(&article.body, lex).values().to_vec(),
        Scheme::ArticleContentPolarity => {
            let mut v = article_content(article);
            v.extend(baseline::polarity_stats(&article.body, lex).values());
            v
        }
        Scheme::TitlePolarity => baseline::polarity_stats(&article.title, lex).values().to_vec(),
        Scheme::TitleContentPolarity => {
            let c = baseline::content_stats(&article.title);
            let mut v = vec![c.word_count, c.nonstop_rate, c.entity_count, c.avg_word_length];
            v.extend(baseline::polarity_stats(&article.title, lex).values());
            v
        }
        Scheme::EventImportance => {
            let (days, articles) = match &ctx.events {
                Some(stats) => stats[index],
                None => {
                    let g = event::EventGraph::new(ctx.corpus.articles(), ctx.params.event_threshold);
                    g.cluster_stats()[index]
                }
            };
            vec![days as f64, articles as f64]
        }
    }
}

fn article_content(article: &NewsArticle) -> Vec<f64> {
    let c = baseline::content_stats(&article.body);
    let dow = baseline::day_of_week(article);
    vec![
        c.word_count,
        c.nonstop_rate,
        dow as f64,
        if dow >= 5 { 1.0 } else { 0.0 },
        c.entity_count,
        c.avg_word_length,
    ]
}

/// One row per corpus article, in article id order. Articles without an
/// association get the empty one.
pub fn assemble_matrix(
    corpus: &Corpus,
    associations: &[ArticleAssociation],
    scheme: Scheme,
    lexicons: &Lexicons,
    params: &FeatureParams,
) -> FeatureMatrix {
    let mut ctx = FeatureContext::new(corpus, associations, lexicons, params);
    if scheme == Scheme::EventImportance {
        ctx = ctx.with_events();
    }
    let columns = scheme.columns(params);
    let rows: Vec<FeatureVector> = (0..corpus.articles().len())
        .into_par_iter()
        .map(|i| {
            let values = article_features(&ctx, i, scheme);
            assert_eq!(values.len(), columns.len(), "{scheme} produced a row of the wrong width");
            let a = &corpus.articles()[i];
            FeatureVector {
                article_id: a.id.clone(),
                scheme,
                values,
                label: a.label,
            }
        })
        .collect();
    FeatureMatrix { scheme, columns, rows }
}
