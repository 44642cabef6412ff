//! Synthetic corpora with planted structure.
//!
//! [`signal_corpus`] plants the next-day label in tweet volume and in the
//! balance of sentiment and concentration of emotion among an article's
//! tweets, while titles carry random sentiment unrelated to the label.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, NaiveDate, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{self, Corpus, NewsArticle, Tweet, UserProfile};

#[derive(Debug, Clone, PartialEq)]
pub struct SignalConfig {
    pub articles: usize,
    /// Probability that an article's label is redrawn uniformly at random
    /// instead of following the planted signal.
    pub noise: f64,
    pub seed: u64,
    pub start: NaiveDate,
    pub days: u32,
    pub users: usize,
    /// Unrelated tweets mentioning only filler words and generic hashtags.
    pub chatter: usize,
}

impl Default for SignalConfig {
    fn default() -> Self {
        SignalConfig {
            articles: 300,
            noise: 0.10,
            seed: 2016,
            start: NaiveDate::from_ymd_opt(2016, 7, 1).expect("valid date"),
            days: 60,
            users: 1500,
            chatter: 300,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub articles: Vec<NewsArticle>,
    pub tweets: Vec<Tweet>,
    pub users: Vec<UserProfile>,
    /// Planted class of every article before label noise.
    pub signal: Vec<u8>,
}

const FILLER: &[&str] = &[
    "city", "officials", "report", "week", "people", "state", "government", "public", "local",
    "county", "statement", "office", "morning", "program", "department", "district", "board",
    "federal", "national", "residents", "agency", "meeting", "budget", "policy", "members",
];
const SUBJECTS: &[&str] = &[
    "Senate", "Mayor", "Council", "Governor", "Court", "Agency", "Police", "Board", "Union",
    "Campaign",
];
const VERBS: &[&str] = &["weighs", "announces", "reviews", "delays", "unveils", "debates", "questions", "backs"];
const TITLE_TONE: &[&str] = &["good", "great", "bad", "awful", "wonderful", "terrible", "fair", "wrong"];
const POSITIVE: &[&str] = &["awesome", "best", "amazing", "thrilled", "brilliant", "excellent"];
const NEGATIVE: &[&str] = &["worst", "stupid", "ugly", "dishonest", "destroy", "harm", "fail"];
/// One word per emotion category, in category order.
const EMOTION_WORDS: [&str; 8] = ["anger", "vote", "disgrace", "afraid", "glad", "sad", "surprise", "honest"];
const GENERIC_TAGS: &[&str] = &["news", "politics", "breaking"];

fn at(day: NaiveDate, seconds: i64) -> DateTime<Utc> {
    Utc.from_utc_datetime(&day.and_hms_opt(0, 0, 0).expect("midnight")) + Duration::seconds(seconds)
}

fn pick<'a>(rng: &mut impl Rng, words: &[&'a str]) -> &'a str {
    words.choose(rng).copied().expect("non-empty word list")
}

fn keywords(i: usize) -> [String; 5] {
    ["a", "b", "c", "d", "e"].map(|s| format!("zq{i}{s}"))
}

/// The labelled-signal corpus.
pub fn signal_corpus(cfg: &SignalConfig) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let end = cfg.start + Duration::days(i64::from(cfg.days));

    let users: Vec<UserProfile> = (0..cfg.users)
        .map(|j| UserProfile {
            user_id: format!("u{j:05}"),
            followers_count: 10u64.pow(rng.gen_range(1..5)) * rng.gen_range(1..10),
            last_active_at: at(end, -rng.gen_range(0..90 * 86_400)),
            verified: rng.gen_bool(0.05),
        })
        .collect();

    let mut articles = Vec::with_capacity(cfg.articles);
    let mut tweets = Vec::new();
    let mut signal = Vec::with_capacity(cfg.articles);
    for i in 0..cfg.articles {
        let day = cfg.start + Duration::days((i as u32 % cfg.days.max(1)) as i64);
        let s = u8::from(rng.gen_bool(0.5));
        let label = if rng.gen_bool(cfg.noise) { u8::from(rng.gen_bool(0.5)) } else { s };
        signal.push(s);

        let kw = keywords(i);
        let title = format!(
            "{} {} {} {} plan",
            pick(&mut rng, SUBJECTS),
            pick(&mut rng, VERBS),
            pick(&mut rng, TITLE_TONE),
            kw[0]
        );
        let mut body: Vec<String> = Vec::new();
        for _ in 0..3 {
            body.extend(kw.iter().cloned());
            for _ in 0..rng.gen_range(6..12) {
                body.push(pick(&mut rng, FILLER).to_string());
            }
        }
        body.shuffle(&mut rng);
        let article = NewsArticle {
            id: format!("s{i:04}"),
            title,
            body: body.join(" ") + ".",
            published_at: at(day, rng.gen_range(6 * 3600..18 * 3600)),
            label,
            section: None,
        };

        let n = if s == 1 { rng.gen_range(30..=60) } else { rng.gen_range(4..=34) };
        let lean_positive = rng.gen_bool(0.5);
        let focus = rng.gen_range(0..8);
        let tag = format!("ev{i}");
        for j in 0..n {
            let mut words: Vec<String> = Vec::new();
            // a fifth of the tweets are reachable only through the hashtag
            let via_tag = j % 5 == 4;
            if via_tag {
                words.push(pick(&mut rng, FILLER).into());
            } else {
                let mut k = kw.clone();
                k.shuffle(&mut rng);
                words.extend(k.into_iter().take(3));
            }
            let tone = rng.gen_range(0.0..1.0);
            let positive = if s == 1 { tone < 0.5 } else { (tone < 0.85) == lean_positive };
            if rng.gen_bool(0.85) {
                let pool = if positive { POSITIVE } else { NEGATIVE };
                words.push(pick(&mut rng, pool).into());
                words.push(pick(&mut rng, pool).into());
            }
            if rng.gen_bool(0.8) {
                let e = if s == 1 && rng.gen_bool(0.8) { focus } else { rng.gen_range(0..8) };
                words.push(EMOTION_WORDS[e].into());
            }
            let mut hashtags = BTreeSet::new();
            if via_tag || rng.gen_bool(0.5) {
                words.push(format!("#{tag}"));
                hashtags.insert(tag.clone());
            }
            if rng.gen_bool(0.3) {
                let g = pick(&mut rng, GENERIC_TAGS);
                words.push(format!("#{g}"));
                hashtags.insert(g.to_string());
            }
            tweets.push(Tweet {
                id: format!("t{i:04}{j:03}"),
                text: words.join(" "),
                user_id: users[rng.gen_range(0..users.len())].user_id.clone(),
                created_at: at(day, rng.gen_range(0..86_400)),
                retweet_count: rng.gen_range(0..50),
                favorite_count: rng.gen_range(0..80),
                hashtags,
            });
        }
        articles.push(article);
    }

    for c in 0..cfg.chatter {
        let day = cfg.start + Duration::days(rng.gen_range(0..i64::from(cfg.days.max(1))));
        let mut words: Vec<String> = (0..6).map(|_| pick(&mut rng, FILLER).to_string()).collect();
        let g = pick(&mut rng, GENERIC_TAGS);
        words.push(format!("#{g}"));
        tweets.push(Tweet {
            id: format!("c{c:05}"),
            text: words.join(" "),
            user_id: users[rng.gen_range(0..users.len())].user_id.clone(),
            created_at: at(day, rng.gen_range(0..86_400)),
            retweet_count: rng.gen_range(0..50),
            favorite_count: rng.gen_range(0..80),
            hashtags: BTreeSet::from([g.to_string()]),
        });
    }

    SyntheticCorpus {
        articles,
        tweets,
        users,
        signal,
    }
}

impl SyntheticCorpus {
    pub fn corpus(&self) -> Corpus {
        Corpus::build(self.articles.clone(), self.tweets.clone(), self.users.clone())
    }

    /// Write `articles.jsonl`, `tweets.jsonl` and `users.jsonl` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<[PathBuf; 3]> {
        std::fs::create_dir_all(dir)?;
        let paths = ["articles.jsonl", "tweets.jsonl", "users.jsonl"].map(|f| dir.join(f));
        corpus::write_jsonl(std::fs::File::create(&paths[0])?, &self.articles)?;
        corpus::write_jsonl(std::fs::File::create(&paths[1])?, &self.tweets)?;
        corpus::write_jsonl(std::fs::File::create(&paths[2])?, &self.users)?;
        Ok(paths)
    }
}
