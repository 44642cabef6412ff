//! Next-day news continuation prediction from same-day Twitter deliberation.
//!
//! The crate is organised as a pipeline of stages, each usable on its own:
//!
//! - [`corpus`]: JSON-Lines loaders and the indexed, read-only [`Corpus`].
//! - [`relevance`]: TF-IDF keywords, seed tweets, generic/article-specific
//!   hashtag labelling and hashtag expansion to a fixpoint.
//! - [`lexicons`]: rule-based sentiment scoring and word-emotion tagging.
//! - [`features`]: involvement and reaction indices plus the five baseline
//!   feature schemes, emitted as CSV matrices.
//! - [`learn`]: CART, random forest and linear SVM with stratified k-fold
//!   cross-validation.
//! - [`pipeline`]: stage orchestration over on-disk artifacts.
//!
//! [`synth`] builds synthetic corpora with planted structure for tests and
//! benchmarks.

pub mod corpus;
pub mod diagnostics;
pub mod features;
pub mod learn;
pub mod lexicons;
pub mod pipeline;
pub mod relevance;
pub mod synth;
pub mod text;

pub use corpus::{Corpus, NewsArticle, Tweet, UserProfile};
pub use diagnostics::Diagnostic;
pub use features::{FeatureVector, Scheme};
pub use learn::{Dataset, EvalReport, TrainedModel};
pub use lexicons::{EmotionLexicon, SentimentLabel, SentimentLexicon};
pub use relevance::{ArticleAssociation, KeywordProfile};
