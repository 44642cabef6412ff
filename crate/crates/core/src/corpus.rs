//! Offline corpus: articles, tweets and user profiles loaded from
//! JSON-Lines files, validated, and indexed for the later stages.
//!
//! All three files hold one JSON object per line. Blank lines are skipped.
//! Timestamps are RFC 3339 and normalised to UTC; calendar days are UTC days.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use chrono::{DateTime, NaiveDate, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::diagnostics::Diagnostic;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed JSON at line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("field `{field}` at line {line}: {message}")]
    Field {
        line: usize,
        field: &'static str,
        message: String,
    },
    #[error("label out of range at line {line}")]
    LabelOutOfRange { line: usize },
    #[error("negative `{field}` at line {line}")]
    NegativeCount { line: usize, field: &'static str },
    #[error("malformed timestamp in `{field}` at line {line}: {value:?}")]
    Timestamp {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("invalid hashtag {tag:?} at line {line}")]
    InvalidHashtag { line: usize, tag: String },
    #[error("duplicate {kind} id {id:?} at line {line}")]
    Duplicate {
        kind: &'static str,
        id: String,
        line: usize,
    },
}

/// One front-page article. `label` is 1 when the same story is covered
/// again on the following day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewsArticle {
    pub id: String,
    pub title: String,
    pub body: String,
    pub published_at: DateTime<Utc>,
    pub label: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<String>,
}

impl NewsArticle {
    pub fn day(&self) -> NaiveDate {
        self.published_at.date_naive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub text: String,
    pub user_id: String,
    pub created_at: DateTime<Utc>,
    pub retweet_count: u64,
    pub favorite_count: u64,
    /// Lowercase, without the leading `#`.
    pub hashtags: BTreeSet<String>,
}

impl Tweet {
    pub fn day(&self) -> NaiveDate {
        self.created_at.date_naive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    pub followers_count: u64,
    pub last_active_at: DateTime<Utc>,
    pub verified: bool,
}

fn hashtag_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"#([A-Za-z0-9_]+)").expect("valid hashtag regex"))
}

/// Hashtags mentioned in `text`, lowercased and without `#`.
pub fn extract_hashtags(text: &str) -> BTreeSet<String> {
    hashtag_regex()
        .captures_iter(text)
        .map(|c| c[1].to_lowercase())
        .collect()
}

/// Normalise a supplied hashtag: strip leading `#`s and lowercase.
/// Returns `None` unless the result is a non-empty run of letters, digits
/// and underscores.
pub fn normalize_hashtag(raw: &str) -> Option<String> {
    let tag = raw.trim().trim_start_matches('#').to_lowercase();
    let valid = !tag.is_empty() && tag.chars().all(|c| c.is_alphanumeric() || c == '_');
    valid.then_some(tag)
}

// ---------------------------------------------------------------------------
// field extraction

struct Record {
    line: usize,
    obj: Map<String, Value>,
}

impl Record {
    fn parse(line: usize, src: &str) -> Result<Self, LoadError> {
        match serde_json::from_str::<Value>(src) {
            Ok(Value::Object(obj)) => Ok(Record { line, obj }),
            Ok(_) => Err(LoadError::Json {
                line,
                message: "expected a JSON object".into(),
            }),
            Err(e) => Err(LoadError::Json {
                line,
                message: e.to_string(),
            }),
        }
    }

    fn field_err(&self, field: &'static str, message: impl Into<String>) -> LoadError {
        LoadError::Field {
            line: self.line,
            field,
            message: message.into(),
        }
    }

    fn get(&self, field: &'static str) -> Result<&Value, LoadError> {
        self.obj
            .get(field)
            .ok_or_else(|| self.field_err(field, "missing"))
    }

    fn string(&self, field: &'static str) -> Result<String, LoadError> {
        self.get(field)?
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| self.field_err(field, "expected a string"))
    }

    fn id(&self, field: &'static str) -> Result<String, LoadError> {
        // numeric ids are accepted and kept in their decimal form
        match self.get(field)? {
            Value::String(s) if !s.is_empty() => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(self.field_err(field, "expected a non-empty string id")),
        }
    }

    fn text(&self, field: &'static str) -> Result<String, LoadError> {
        let s = self.string(field)?;
        if s.trim().is_empty() {
            return Err(self.field_err(field, "empty after trimming"));
        }
        Ok(s)
    }

    fn count(&self, field: &'static str) -> Result<u64, LoadError> {
        let v = self.get(field)?;
        if let Some(n) = v.as_u64() {
            return Ok(n);
        }
        match v.as_i64() {
            Some(_) => Err(LoadError::NegativeCount {
                line: self.line,
                field,
            }),
            None => Err(self.field_err(field, "expected an integer")),
        }
    }

    fn timestamp(&self, field: &'static str) -> Result<DateTime<Utc>, LoadError> {
        let s = self.string(field)?;
        DateTime::parse_from_rfc3339(&s)
            .map(|t| t.with_timezone(&Utc))
            .map_err(|_| LoadError::Timestamp {
                line: self.line,
                field,
                value: s,
            })
    }

    fn boolean(&self, field: &'static str) -> Result<bool, LoadError> {
        self.get(field)?
            .as_bool()
            .ok_or_else(|| self.field_err(field, "expected a boolean"))
    }
}

fn open(path: &Path) -> Result<BufReader<File>, LoadError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn for_each_record<R: BufRead>(
    reader: R,
    mut f: impl FnMut(Record) -> Result<(), LoadError>,
) -> Result<(), LoadError> {
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| LoadError::Json {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        f(Record::parse(line_no, &line)?)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// loaders

pub fn parse_articles<R: BufRead>(reader: R) -> Result<Vec<NewsArticle>, LoadError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for_each_record(reader, |rec| {
        let id = rec.id("id")?;
        let title = rec.text("title")?;
        let body = rec.text("body")?;
        let published_at = rec.timestamp("published_at")?;
        let label = match rec.get("label")?.as_i64() {
            Some(l @ (0 | 1)) => l as u8,
            Some(_) => return Err(LoadError::LabelOutOfRange { line: rec.line }),
            None => return Err(rec.field_err("label", "expected 0 or 1")),
        };
        let section = match rec.obj.get("section") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(rec.field_err("section", "expected a string")),
        };
        if !seen.insert(id.clone()) {
            return Err(LoadError::Duplicate {
                kind: "article",
                id,
                line: rec.line,
            });
        }
        out.push(NewsArticle {
            id,
            title,
            body,
            published_at,
            label,
            section,
        });
        Ok(())
    })?;
    Ok(out)
}

pub fn parse_tweets<R: BufRead>(reader: R) -> Result<Vec<Tweet>, LoadError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for_each_record(reader, |rec| {
        let id = rec.id("id")?;
        let text = rec.string("text")?;
        let user_id = rec.id("user_id")?;
        let created_at = rec.timestamp("created_at")?;
        let retweet_count = rec.count("retweet_count")?;
        let favorite_count = rec.count("favorite_count")?;
        let mut hashtags = extract_hashtags(&text);
        match rec.obj.get("hashtags") {
            None | Some(Value::Null) => {}
            Some(Value::Array(items)) => {
                for item in items {
                    let raw = item
                        .as_str()
                        .ok_or_else(|| rec.field_err("hashtags", "expected strings"))?;
                    let tag = normalize_hashtag(raw).ok_or_else(|| LoadError::InvalidHashtag {
                        line: rec.line,
                        tag: raw.to_string(),
                    })?;
                    hashtags.insert(tag);
                }
            }
            Some(_) => return Err(rec.field_err("hashtags", "expected an array")),
        }
        if !seen.insert(id.clone()) {
            return Err(LoadError::Duplicate {
                kind: "tweet",
                id,
                line: rec.line,
            });
        }
        out.push(Tweet {
            id,
            text,
            user_id,
            created_at,
            retweet_count,
            favorite_count,
            hashtags,
        });
        Ok(())
    })?;
    Ok(out)
}

pub fn parse_users<R: BufRead>(reader: R) -> Result<Vec<UserProfile>, LoadError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for_each_record(reader, |rec| {
        let user_id = rec.id("user_id")?;
        let followers_count = rec.count("followers_count")?;
        let last_active_at = rec.timestamp("last_active_at")?;
        let verified = rec.boolean("verified")?;
        if !seen.insert(user_id.clone()) {
            return Err(LoadError::Duplicate {
                kind: "user",
                id: user_id,
                line: rec.line,
            });
        }
        out.push(UserProfile {
            user_id,
            followers_count,
            last_active_at,
            verified,
        });
        Ok(())
    })?;
    Ok(out)
}

pub fn load_articles(path: impl AsRef<Path>) -> Result<Vec<NewsArticle>, LoadError> {
    parse_articles(open(path.as_ref())?)
}

pub fn load_tweets(path: impl AsRef<Path>) -> Result<Vec<Tweet>, LoadError> {
    parse_tweets(open(path.as_ref())?)
}

pub fn load_users(path: impl AsRef<Path>) -> Result<Vec<UserProfile>, LoadError> {
    parse_users(open(path.as_ref())?)
}

/// Write records as JSON-Lines, one object per line.
pub fn write_jsonl<W: Write, T: Serialize>(mut w: W, records: &[T]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// corpus

/// An indexed, immutable corpus. Records are held sorted by id and every
/// index lists positions in ascending (hence id) order.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    articles: Vec<NewsArticle>,
    tweets: Vec<Tweet>,
    users: Vec<UserProfile>,
    article_by_id: BTreeMap<String, usize>,
    tweet_by_id: BTreeMap<String, usize>,
    user_by_id: BTreeMap<String, usize>,
    hashtag_index: BTreeMap<String, Vec<usize>>,
    user_tweets: BTreeMap<String, Vec<usize>>,
    articles_by_day: BTreeMap<NaiveDate, Vec<usize>>,
    tweets_by_day: BTreeMap<NaiveDate, Vec<usize>>,
    diagnostics: Vec<Diagnostic>,
}

impl Corpus {
    /// Build all indexes. Tweets whose author has no profile are kept and
    /// reported once per missing user id in [`Corpus::diagnostics`].
    pub fn build(
        mut articles: Vec<NewsArticle>,
        mut tweets: Vec<Tweet>,
        mut users: Vec<UserProfile>,
    ) -> Corpus {
        articles.sort_by(|a, b| a.id.cmp(&b.id));
        tweets.sort_by(|a, b| a.id.cmp(&b.id));
        users.sort_by(|a, b| a.user_id.cmp(&b.user_id));

        let article_by_id = articles
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), i))
            .collect();
        let tweet_by_id = tweets
            .iter()
            .enumerate()
            .map(|(i, t)| (t.id.clone(), i))
            .collect();
        let user_by_id: BTreeMap<String, usize> = users
            .iter()
            .enumerate()
            .map(|(i, u)| (u.user_id.clone(), i))
            .collect();

        let mut hashtag_index: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut user_tweets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut tweets_by_day: BTreeMap<NaiveDate, Vec<usize>> = BTreeMap::new();
        for (i, t) in tweets.iter().enumerate() {
            for h in &t.hashtags {
                hashtag_index.entry(h.clone()).or_default().push(i);
            }
            user_tweets.entry(t.user_id.clone()).or_default().push(i);
            tweets_by_day.entry(t.day()).or_default().push(i);
        }
        let mut articles_by_day: BTreeMap<NaiveDate, Vec<usize>> = BTreeMap::new();
        for (i, a) in articles.iter().enumerate() {
            articles_by_day.entry(a.day()).or_default().push(i);
        }

        let diagnostics = user_tweets
            .keys()
            .filter(|u| !user_by_id.contains_key(*u))
            .map(|u| Diagnostic::UnresolvedUser { user_id: u.clone() })
            .collect();

        Corpus {
            articles,
            tweets,
            users,
            article_by_id,
            tweet_by_id,
            user_by_id,
            hashtag_index,
            user_tweets,
            articles_by_day,
            tweets_by_day,
            diagnostics,
        }
    }

    /// Load and index the three corpus files.
    pub fn load(
        articles: impl AsRef<Path>,
        tweets: impl AsRef<Path>,
        users: impl AsRef<Path>,
    ) -> Result<Corpus, LoadError> {
        Ok(Corpus::build(
            load_articles(articles)?,
            load_tweets(tweets)?,
            load_users(users)?,
        ))
    }

    pub fn articles(&self) -> &[NewsArticle] {
        &self.articles
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn users(&self) -> &[UserProfile] {
        &self.users
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn article(&self, id: &str) -> Option<&NewsArticle> {
        self.article_by_id.get(id).map(|&i| &self.articles[i])
    }

    pub fn tweet(&self, id: &str) -> Option<&Tweet> {
        self.tweet_by_id.get(id).map(|&i| &self.tweets[i])
    }

    pub fn user(&self, user_id: &str) -> Option<&UserProfile> {
        self.user_by_id.get(user_id).map(|&i| &self.users[i])
    }

    /// Tweets carrying `hashtag`, in id order.
    pub fn tweets_with_hashtag<'a>(&'a self, hashtag: &str) -> impl Iterator<Item = &'a Tweet> + 'a {
        self.hashtag_index
            .get(hashtag)
            .into_iter()
            .flatten()
            .map(move |&i| &self.tweets[i])
    }

    pub fn hashtags(&self) -> impl Iterator<Item = &str> {
        self.hashtag_index.keys().map(String::as_str)
    }

    pub fn tweets_by_user<'a>(&'a self, user_id: &str) -> impl Iterator<Item = &'a Tweet> + 'a {
        self.user_tweets
            .get(user_id)
            .into_iter()
            .flatten()
            .map(move |&i| &self.tweets[i])
    }

    /// Tweets created on `day` (UTC), in id order.
    pub fn tweets_on<'a>(&'a self, day: NaiveDate) -> impl Iterator<Item = &'a Tweet> + 'a {
        self.tweets_by_day
            .get(&day)
            .into_iter()
            .flatten()
            .map(move |&i| &self.tweets[i])
    }

    /// Tweets created on days in `[from, to)`.
    pub fn tweets_between<'a>(
        &'a self,
        from: NaiveDate,
        to: NaiveDate,
    ) -> impl Iterator<Item = &'a Tweet> + 'a {
        self.tweets_by_day
            .range(from..to)
            .flat_map(|(_, ix)| ix.iter())
            .map(move |&i| &self.tweets[i])
    }

    pub fn articles_on<'a>(&'a self, day: NaiveDate) -> impl Iterator<Item = &'a NewsArticle> + 'a {
        self.articles_by_day
            .get(&day)
            .into_iter()
            .flatten()
            .map(move |&i| &self.articles[i])
    }

    /// Articles published on days in `[from, to)`.
    pub fn articles_between<'a>(
        &'a self,
        from: NaiveDate,
        to: NaiveDate,
    ) -> impl Iterator<Item = &'a NewsArticle> + 'a {
        self.articles_by_day
            .range(from..to)
            .flat_map(|(_, ix)| ix.iter())
            .map(move |&i| &self.articles[i])
    }

    /// Serialise the three record lists as JSON-Lines.
    pub fn write_jsonl<A: Write, T: Write, U: Write>(
        &self,
        articles: A,
        tweets: T,
        users: U,
    ) -> io::Result<()> {
        write_jsonl(articles, &self.articles)?;
        write_jsonl(tweets, &self.tweets)?;
        write_jsonl(users, &self.users)
    }
}
