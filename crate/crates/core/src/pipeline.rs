//! Stage orchestration over on-disk artifacts.
//!
//! Each stage reads its inputs from the configured paths or from the
//! output directory and writes one deterministic artifact back into it:
//! `associations.jsonl`, `features_<scheme>.csv`, `report.json` and
//! `report.md`.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{self, Corpus, LoadError};
use crate::diagnostics::Diagnostic;
use crate::features::{assemble_matrix, FeatureParams, Scheme};
use crate::learn::report::{render_markdown, SchemeEvaluation};
use crate::learn::{derive_seed, kfold_cv, svm, Dataset, LearnError, LearnParams};
use crate::lexicons::{EmotionLexicon, LexiconError, Lexicons, SentimentLexicon};
use crate::relevance::{ArticleAssociation, Associator, RelevanceParams};

pub const ASSOCIATIONS_FILE: &str = "associations.jsonl";
pub const REPORT_JSON: &str = "report.json";
pub const REPORT_MD: &str = "report.md";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{what} not found: {}", path.display())]
    MissingPath { what: &'static str, path: PathBuf },
    #[error("{0}")]
    Prerequisite(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("{context}: {source}")]
    Learn {
        context: String,
        #[source]
        source: LearnError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: line {line}: {message}", path.display())]
    Artifact { path: PathBuf, line: usize, message: String },
}

impl PipelineError {
    /// 2 for usage and configuration problems, 3 for data and statistical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::MissingPath { .. } | PipelineError::Prerequisite(_) => 2,
            _ => 3,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub articles: PathBuf,
    pub tweets: PathBuf,
    pub users: PathBuf,
    /// Bundled lexicons are used when unset.
    pub sentiment_lexicon: Option<PathBuf>,
    pub emotion_lexicon: Option<PathBuf>,
    pub output_dir: PathBuf,
}

impl Default for Paths {
    fn default() -> Self {
        Paths {
            articles: "articles.jsonl".into(),
            tweets: "tweets.jsonl".into(),
            users: "users.jsonl".into(),
            sentiment_lexicon: None,
            emotion_lexicon: None,
            output_dir: "out".into(),
        }
    }
}

impl Paths {
    /// Make relative paths relative to `base`.
    pub fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.articles);
        fix(&mut self.tweets);
        fix(&mut self.users);
        fix(&mut self.output_dir);
        self.sentiment_lexicon.iter_mut().for_each(fix);
        self.emotion_lexicon.iter_mut().for_each(fix);
    }

    pub fn associations(&self) -> PathBuf {
        self.output_dir.join(ASSOCIATIONS_FILE)
    }

    pub fn features(&self, scheme: Scheme) -> PathBuf {
        self.output_dir.join(format!("features_{}.csv", scheme.name()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub relevance: RelevanceParams,
    pub features: FeatureParams,
    pub learn: LearnParams,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Config(m.to_string()));
        let r = &self.relevance;
        if r.keywords == 0 {
            return bad("relevance.keywords must be at least 1");
        }
        if r.min_overlap == 0 {
            return bad("relevance.min_overlap must be at least 1");
        }
        if !(0.0..=1.0).contains(&r.generic.quantile) {
            return bad("relevance.generic.quantile must lie in [0, 1]");
        }
        if r.history_days == 0 {
            return bad("relevance.history_days must be at least 1");
        }
        let f = &self.features;
        if f.active_window_days < 0 {
            return bad("features.active_window_days must be non-negative");
        }
        if !(0.0..=1.0).contains(&f.event_threshold) {
            return bad("features.event_threshold must lie in [0, 1]");
        }
        let l = &self.learn;
        if l.k < 2 {
            return bad("learn.k must be at least 2");
        }
        if l.classifiers.is_empty() {
            return bad("learn.classifiers must not be empty");
        }
        if l.forest.n_trees == 0 {
            return bad("learn.forest.n_trees must be at least 1");
        }
        if l.cart.min_samples_leaf == 0 || l.forest.tree.min_samples_leaf == 0 {
            return bad("min_samples_leaf must be at least 1");
        }
        if !(l.svm.c > 0.0 && l.svm.c.is_finite()) {
            return bad("learn.svm.c must be positive");
        }
        if l.svm.epochs == 0 {
            return bad("learn.svm.epochs must be at least 1");
        }
        Ok(())
    }

    /// Everything except paths; echoed into reports.
    pub fn parameters(&self) -> serde_json::Value {
        serde_json::json!({
            "relevance": self.relevance,
            "features": self.features,
            "learn": self.learn,
        })
    }
}

fn require(what: &'static str, path: &Path) -> Result<(), PipelineError> {
    if path.exists() {
        Ok(())
    } else {
        Err(PipelineError::MissingPath {
            what,
            path: path.to_path_buf(),
        })
    }
}

fn ensure_output_dir(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let dir = &cfg.paths.output_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn load_lexicons(cfg: &PipelineConfig) -> Result<Lexicons, PipelineError> {
    let sentiment = match &cfg.paths.sentiment_lexicon {
        Some(p) => {
            require("sentiment lexicon", p)?;
            SentimentLexicon::load(p)?
        }
        None => SentimentLexicon::bundled(),
    };
    let emotion = match &cfg.paths.emotion_lexicon {
        Some(p) => {
            require("emotion lexicon", p)?;
            EmotionLexicon::load(p)?
        }
        None => EmotionLexicon::bundled(),
    };
    Ok(Lexicons { sentiment, emotion })
}

/// Articles always; tweets and users only when `with_tweets`.
pub fn load_corpus(cfg: &PipelineConfig, with_tweets: bool) -> Result<Corpus, PipelineError> {
    let p = &cfg.paths;
    require("articles file", &p.articles)?;
    let articles = corpus::load_articles(&p.articles)?;
    if !with_tweets {
        return Ok(Corpus::build(articles, Vec::new(), Vec::new()));
    }
    require("tweets file", &p.tweets)?;
    require("users file", &p.users)?;
    Ok(Corpus::build(
        articles,
        corpus::load_tweets(&p.tweets)?,
        corpus::load_users(&p.users)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestSummary {
    pub articles: usize,
    pub positive_articles: usize,
    pub tweets: usize,
    pub users: usize,
    pub hashtags: usize,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn ingest_check(cfg: &PipelineConfig) -> Result<IngestSummary, PipelineError> {
    let c = load_corpus(cfg, true)?;
    load_lexicons(cfg)?;
    Ok(IngestSummary {
        articles: c.articles().len(),
        positive_articles: c.articles().iter().filter(|a| a.label == 1).count(),
        tweets: c.tweets().len(),
        users: c.users().len(),
        hashtags: c.hashtags().count(),
        diagnostics: c.diagnostics().to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociateOutcome {
    pub associations: Vec<ArticleAssociation>,
    pub diagnostics: Vec<Diagnostic>,
}

impl AssociateOutcome {
    pub fn summary_line(&self) -> String {
        let n = self.associations.len();
        let tweets: usize = self.associations.iter().map(|a| a.expanded_tweet_ids.len()).sum();
        let iters: u32 = self.associations.iter().map(|a| a.iterations_run).sum();
        let mean = if n == 0 { 0.0 } else { f64::from(iters) / n as f64 };
        format!("articles={n} associated_tweets={tweets} mean_iterations={mean:.2}")
    }
}

pub fn associate_corpus(corpus: &Corpus, params: &RelevanceParams) -> AssociateOutcome {
    let (associations, mut diagnostics) = Associator::new(corpus, *params).associate_all();
    let mut all = corpus.diagnostics().to_vec();
    all.append(&mut diagnostics);
    AssociateOutcome {
        associations,
        diagnostics: all,
    }
}

pub fn associations_jsonl(assocs: &[ArticleAssociation]) -> Vec<u8> {
    let mut buf = Vec::new();
    corpus::write_jsonl(&mut buf, assocs).expect("writing to memory");
    buf
}

/// Writes `associations.jsonl`.
pub fn associate(cfg: &PipelineConfig) -> Result<AssociateOutcome, PipelineError> {
    let corpus = load_corpus(cfg, true)?;
    let out = associate_corpus(&corpus, &cfg.relevance);
    ensure_output_dir(cfg)?;
    write_atomic(&cfg.paths.associations(), &associations_jsonl(&out.associations))?;
    Ok(out)
}

pub fn read_associations(path: &Path) -> Result<Vec<ArticleAssociation>, PipelineError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| PipelineError::Artifact {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Writes `features_<scheme>.csv` for each scheme and returns the paths.
/// Only the proposed scheme needs tweets, users and `associations.jsonl`.
pub fn features(cfg: &PipelineConfig, schemes: &[Scheme]) -> Result<Vec<PathBuf>, PipelineError> {
    let with_tweets = schemes.iter().any(|s| s.needs_tweets());
    let associations = if with_tweets {
        let path = cfg.paths.associations();
        if !path.exists() {
            return Err(PipelineError::Prerequisite(format!(
                "{} not found; run `associate` before computing the proposed features",
                path.display()
            )));
        }
        read_associations(&path)?
    } else {
        Vec::new()
    };
    let corpus = load_corpus(cfg, with_tweets)?;
    let lex = load_lexicons(cfg)?;
    ensure_output_dir(cfg)?;
    let mut written = Vec::new();
    for &scheme in schemes {
        let m = assemble_matrix(&corpus, &associations, scheme, &lex, &cfg.features);
        let path = cfg.paths.features(scheme);
        write_atomic(&path, m.to_csv_string().as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

/// Seed of repeat `r`: the configured seed first, then derived ones.
pub fn repeat_seed(seed: u64, r: usize) -> u64 {
    if r == 0 {
        seed
    } else {
        derive_seed(seed, (1 << 32) + r as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub parameters: serde_json::Value,
    pub repeats: usize,
    pub schemes: Vec<SchemeEvaluation>,
}

impl EvaluationReport {
    pub fn scheme(&self, name: &str) -> Option<&SchemeEvaluation> {
        self.schemes.iter().find(|s| s.scheme == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn evaluate_datasets(
    datasets: &[(Scheme, Dataset)],
    cfg: &PipelineConfig,
    repeats: usize,
) -> Result<(EvaluationReport, Vec<Diagnostic>), PipelineError> {
    let mut schemes = Vec::new();
    let mut diagnostics = Vec::new();
    for (scheme, data) in datasets {
        if cfg.learn.classifiers.contains(&crate::learn::ClassifierKind::LinearSvm) {
            diagnostics.extend(svm::zero_variance_diagnostics(data));
        }
        let runs = (0..repeats.max(1))
            .map(|r| {
                kfold_cv(data, cfg.learn.k, &cfg.learn, repeat_seed(cfg.learn.seed, r)).map_err(|source| {
                    PipelineError::Learn {
                        context: format!("scheme {scheme}"),
                        source,
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        schemes.push(SchemeEvaluation::new(scheme.name(), runs));
    }
    Ok((
        EvaluationReport {
            parameters: cfg.parameters(),
            repeats: repeats.max(1),
            schemes,
        },
        diagnostics,
    ))
}

/// Schemes whose feature CSV exists in the output directory.
pub fn available_schemes(cfg: &PipelineConfig) -> Vec<Scheme> {
    Scheme::ALL
        .into_iter()
        .filter(|&s| cfg.paths.features(s).exists())
        .collect()
}

/// Cross-validates every requested scheme and writes `report.json` and
/// `report.md`.
pub fn evaluate(
    cfg: &PipelineConfig,
    schemes: &[Scheme],
    repeats: usize,
) -> Result<(EvaluationReport, Vec<Diagnostic>), PipelineError> {
    if schemes.is_empty() {
        return Err(PipelineError::Prerequisite(format!(
            "no feature matrices in {}; run `features` first",
            cfg.paths.output_dir.display()
        )));
    }
    let mut datasets = Vec::new();
    for &s in schemes {
        let path = cfg.paths.features(s);
        if !path.exists() {
            return Err(PipelineError::Prerequisite(format!(
                "{} not found; run `features --scheme {}` first",
                path.display(),
                s.name()
            )));
        }
        let data = Dataset::from_csv_path(&path).map_err(|source| PipelineError::Learn {
            context: path.display().to_string(),
            source,
        })?;
        datasets.push((s, data));
    }
    let (report, diagnostics) = evaluate_datasets(&datasets, cfg, repeats)?;
    ensure_output_dir(cfg)?;
    write_atomic(&cfg.paths.output_dir.join(REPORT_JSON), report.to_json().as_bytes())?;
    write_atomic(
        &cfg.paths.output_dir.join(REPORT_MD),
        render_markdown(&report.schemes).as_bytes(),
    )?;
    Ok((report, diagnostics))
}

/// Re-renders `report.md` from `report.json` and returns it.
pub fn report(cfg: &PipelineConfig) -> Result<String, PipelineError> {
    let path = cfg.paths.output_dir.join(REPORT_JSON);
    if !path.exists() {
        return Err(PipelineError::Prerequisite(format!(
            "{} not found; run `evaluate` first",
            path.display()
        )));
    }
    let src = fs::read_to_string(&path).map_err(io_err(&path))?;
    let parsed: EvaluationReport = serde_json::from_str(&src).map_err(|e| PipelineError::Artifact {
        path: path.clone(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let md = render_markdown(&parsed.schemes);
    write_atomic(&cfg.paths.output_dir.join(REPORT_MD), md.as_bytes())?;
    Ok(md)
}

/// Write `value` as pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), PipelineError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| PipelineError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}
