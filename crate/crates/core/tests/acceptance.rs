//! Acceptance suite. Each criterion runs in isolation and prints one
//! PASS/FAIL line; the process exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use headline_core::features::reaction::{emotion_variance, sentiment_variance};
use headline_core::features::Scheme;
use headline_core::learn::cart::{candidates, train_cart, CartConfig};
use headline_core::learn::cv::stratified_folds;
use headline_core::learn::forest::{train_forest, FeatureSubsample, ForestConfig};
use headline_core::learn::metrics::f_score;
use headline_core::learn::{train, ClassifierKind, Dataset, LearnParams, ModelParams};
use headline_core::lexicons::{score_sentiment, SentimentLexicon};
use headline_core::pipeline::{self, PipelineConfig};
use headline_core::relevance::{classify_hashtags, expand_association, Associator, HashtagKind};
use headline_core::synth::{signal_corpus, SignalConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden")
}

fn within(limit: Duration, start: Instant) {
    let took = start.elapsed();
    assert!(took < limit, "took {took:?}, limit {limit:?}");
}

// ---------------------------------------------------------------------------
// 1. SV and EV against exact integer arithmetic

fn criterion_formula_oracles() -> String {
    let start = Instant::now();
    assert_eq!(sentiment_variance(5, 3), 0.75);
    assert_eq!(emotion_variance(&[8, 0, 0, 0, 0, 0, 0, 0]), 7.0);

    // SV = 1 - |PC - NC| / (PC + NC) = ((PC + NC) - |PC - NC|) / (PC + NC);
    // numerator and denominator are small integers, so one f64 division
    // gives the correctly rounded value.
    let mut sv_cases = 0;
    for pc in 0u64..=50 {
        for nc in 0u64..=50 {
            let total = pc + nc;
            let want = if total == 0 {
                0.0
            } else {
                (total - pc.abs_diff(nc)) as f64 / total as f64
            };
            assert_eq!(sentiment_variance(pc, nc), want, "SV({pc}, {nc})");
            sv_cases += 1;
        }
    }

    // EV = (8 sum c^2 - N^2) / 64: an integer over a power of two, exact.
    let mut ev_cases = 0u64;
    let mut counts = [0u64; 8];
    fn sweep(pos: usize, left: u64, counts: &mut [u64; 8], cases: &mut u64) {
        if pos == 8 {
            let n: u64 = counts.iter().sum();
            let sq: u64 = counts.iter().map(|c| c * c).sum();
            let want = (8 * sq - n * n) as f64 / 64.0;
            assert_eq!(emotion_variance(counts), want, "EV({counts:?})");
            *cases += 1;
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            sweep(pos + 1, left - c, counts, cases);
        }
        counts[pos] = 0;
    }
    sweep(0, 16, &mut counts, &mut ev_cases);
    assert_eq!(ev_cases, 735_471);
    within(Duration::from_secs(5), start);
    format!("{sv_cases} SV cases, {ev_cases} EV cases")
}

// ---------------------------------------------------------------------------
// 2. published precision/recall pairs

fn criterion_metric_consistency() -> String {
    let start = Instant::now();
    let pairs = [((94.6, 83.33), 88.6), ((91.4, 84.2), 87.6)];
    let mut got = Vec::new();
    for ((p, r), f) in pairs {
        let v = f_score(p, r);
        assert!((v - f).abs() <= 0.1, "F({p}, {r}) = {v}, expected {f}");
        got.push(format!("{v:.2}"));
    }
    within(Duration::from_secs(1), start);
    format!("F = {}", got.join(", "))
}

// ---------------------------------------------------------------------------
// 3. hashtag classification and expansion on the golden corpus

fn criterion_association_fixpoint() -> String {
    let start = Instant::now();
    let truth: Value = serde_json::from_str(&fs::read_to_string(golden().join("truth.json")).unwrap()).unwrap();
    let set = |key: &str| -> BTreeSet<String> {
        truth[key].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect()
    };
    let mut cfg = PipelineConfig::default();
    cfg.paths.resolve(&golden());
    let corpus = pipeline::load_corpus(&cfg, true).unwrap();
    assert_eq!(corpus.tweets().len(), 200);

    let assoc = Associator::new(&corpus, cfg.relevance);
    let target = corpus.article(truth["article_id"].as_str().unwrap()).unwrap();
    let history = assoc.history_for(target);

    let generic = set("generic_hashtags");
    let specific = set("article_specific_hashtags");
    let labels = classify_hashtags(
        &target.id,
        generic.iter().chain(&specific).map(String::as_str),
        &history,
        &cfg.relevance.generic,
    );
    let mut agree = 0;
    for l in &labels.labels {
        let want = if generic.contains(&l.hashtag) {
            HashtagKind::Generic
        } else {
            HashtagKind::ArticleSpecific
        };
        assert_eq!(l.label, want, "hashtag #{}", l.hashtag);
        agree += 1;
    }
    assert_eq!(agree, generic.len() + specific.len());

    let profile = assoc.profile(&target.id).unwrap();
    let (a, _) = expand_association(target, profile, &corpus, &history, &cfg.relevance);
    assert_eq!(a.seed_tweet_ids, set("seed_tweet_ids"));
    assert_eq!(a.expanded_tweet_ids, set("expanded_tweet_ids"));
    assert!(a.iterations_run <= 3);
    assert_eq!(u64::from(a.iterations_run), truth["iterations_run"].as_u64().unwrap());
    within(Duration::from_secs(5), start);
    format!(
        "{agree}/{agree} hashtags agree, {} tweets after {} iterations",
        a.expanded_tweet_ids.len(),
        a.iterations_run
    )
}

// ---------------------------------------------------------------------------
// 4. planted signal recovered end to end

fn criterion_signal_recovery() -> String {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    signal_corpus(&SignalConfig::default()).write(dir.path()).unwrap();
    let mut cfg = PipelineConfig::default();
    cfg.paths.resolve(dir.path());
    let schemes = [Scheme::Proposed, Scheme::TitlePolarity];
    pipeline::associate(&cfg).unwrap();
    pipeline::features(&cfg, &schemes).unwrap();
    let (report, _) = pipeline::evaluate(&cfg, &schemes, 1).unwrap();

    let proposed = report.scheme(Scheme::Proposed.name()).unwrap();
    let baseline = report.scheme(Scheme::TitlePolarity.name()).unwrap();
    let run = &proposed.runs[0];
    let fs: Vec<String> = ClassifierKind::ALL
        .iter()
        .map(|&k| format!("{} {:.1}", k.label(), run.classifier(k).unwrap().scores.f_score))
        .collect();
    let (best, base) = (proposed.best_f(), baseline.best_f());
    assert!(best >= 90.0, "best proposed F {best:.1} < 90 ({})", fs.join(", "));
    assert!(best - base >= 5.0, "proposed {best:.1} vs title polarity {base:.1}");
    within(Duration::from_secs(120), start);
    format!("proposed {} vs title polarity best {base:.1}", fs.join(", "))
}

// ---------------------------------------------------------------------------
// 5. classifier unit properties

fn cart_fixture() -> Dataset {
    let x = [(1, 7), (2, 3), (3, 8), (4, 1), (5, 6), (6, 2), (7, 5), (8, 4)];
    let y = [0, 0, 1, 0, 1, 1, 0, 1];
    Dataset::new(
        vec!["x0".into(), "x1".into()],
        x.iter().map(|&(a, b)| vec![f64::from(a), f64::from(b)]).collect(),
        y.to_vec(),
    )
    .unwrap()
}

fn criterion_classifier_properties() -> String {
    let start = Instant::now();

    // Gini table computed with exact fractions by tools/gini_table.py
    let data = cart_fixture();
    let root: Vec<usize> = (0..8).collect();
    let table: [(usize, f64, f64); 14] = [
        (0, 1.5, 3.0 / 7.0),
        (0, 2.5, 1.0 / 3.0),
        (0, 3.5, 7.0 / 15.0),
        (0, 4.5, 3.0 / 8.0),
        (0, 5.5, 7.0 / 15.0),
        (0, 6.5, 1.0 / 2.0),
        (0, 7.5, 3.0 / 7.0),
        (1, 1.5, 3.0 / 7.0),
        (1, 2.5, 1.0 / 2.0),
        (1, 3.5, 7.0 / 15.0),
        (1, 4.5, 1.0 / 2.0),
        (1, 5.5, 7.0 / 15.0),
        (1, 6.5, 1.0 / 2.0),
        (1, 7.5, 3.0 / 7.0),
    ];
    let got: Vec<_> = (0..2).flat_map(|f| candidates(&data, &root, f, 1)).collect();
    assert_eq!(got.len(), table.len());
    for (c, &(f, t, g)) in got.iter().zip(&table) {
        assert_eq!((c.feature, c.threshold), (f, t));
        assert!((c.weighted_gini - g).abs() < 1e-12, "gini at x{f} <= {t}: {}", c.weighted_gini);
    }
    let cfg = CartConfig {
        max_depth: 8,
        min_samples_leaf: 1,
    };
    let model = train_cart(&data, &cfg);
    let ModelParams::Cart { tree, .. } = &model.params else {
        panic!("not a tree");
    };
    assert_eq!(tree.splits(), vec![(0, 2.5), (1, 1.5), (0, 6.5), (0, 7.5)]);

    // degenerate forest against CART
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rows: Vec<Vec<f64>> = (0..200).map(|_| (0..5).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
    let labels: Vec<u8> = rows
        .iter()
        .map(|r| u8::from(r[0] + 0.5 * r[1] * r[2] + rng.gen_range(-0.8..0.8) > 0.0))
        .collect();
    let names = (0..5).map(|i| format!("f{i}")).collect();
    let data = Dataset::new(names, rows, labels).unwrap();
    let cart = train_cart(&data, &CartConfig::default());
    let forest_cfg = ForestConfig {
        n_trees: 1,
        max_features: FeatureSubsample::All,
        bootstrap: false,
        tree: CartConfig::default(),
    };
    let forest = train_forest(&data, &forest_cfg, 99);
    for _ in 0..1000 {
        let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-4.0..4.0)).collect();
        assert_eq!(forest.predict(&x), cart.predict(&x), "at {x:?}");
    }

    // separable 4-point set
    let svm_data = Dataset::new(
        vec!["a".into(), "b".into()],
        vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![-1.0, -1.5], vec![-2.0, -1.0]],
        vec![1, 1, 0, 0],
    )
    .unwrap();
    let svm = train(ClassifierKind::LinearSvm, &svm_data, &LearnParams::default(), 42);
    for (x, &y) in svm_data.rows.iter().zip(&svm_data.labels) {
        assert_eq!(svm.predict(x), y, "SVM at {x:?}");
    }

    // stratified folds on 300 rows, 114 of them positive
    let labels: Vec<u8> = (0..300).map(|i| u8::from(i % 8 < 3)).collect();
    let positives = labels.iter().filter(|&&l| l == 1).count();
    let expected = 30.0 * positives as f64 / 300.0;
    let folds = stratified_folds(&labels, 10, 42).unwrap();
    for f in &folds {
        assert_eq!(f.len(), 30);
        let pos = f.iter().filter(|&&i| labels[i] == 1).count() as f64;
        assert!((pos - expected).abs() <= 1.0, "fold with {pos} positives, expected ~{expected}");
    }
    within(Duration::from_secs(30), start);
    format!("4 splits match the hand table, 1000 forest/CART agreements, {positives}/300 positives stratified")
}

// ---------------------------------------------------------------------------
// 6. byte-identical reruns

fn run_full(out: &Path) -> Vec<(String, Vec<u8>)> {
    let mut cfg = PipelineConfig::default();
    cfg.paths.output_dir = out.to_path_buf();
    cfg.paths.resolve(&golden());
    pipeline::associate(&cfg).unwrap();
    pipeline::features(&cfg, &Scheme::ALL).unwrap();
    pipeline::evaluate(&cfg, &Scheme::ALL, 1).unwrap();
    let mut files: Vec<_> = fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn criterion_determinism() -> String {
    let start = Instant::now();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_full(a.path());
    let second = run_full(b.path());
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    for required in ["associations.jsonl", "report.json", "features_proposed.csv"] {
        assert!(names.contains(&required), "{required} missing");
    }
    assert_eq!(names.len(), second.len());
    for ((na, ba), (nb, bb)) in first.iter().zip(&second) {
        assert_eq!(na, nb);
        assert!(ba == bb, "{na} differs between runs");
    }
    within(Duration::from_secs(60), start);
    format!("{} files identical", first.len())
}

// ---------------------------------------------------------------------------
// 7. sentiment scorer contract

fn lexicon_words() -> (Vec<String>, Vec<String>) {
    let src = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sentiment_lexicon.tsv")).unwrap();
    let mut pos = Vec::new();
    let mut all = Vec::new();
    for line in src.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let mut cols = line.split('\t');
        let word = cols.next().unwrap().trim().to_string();
        let v: f64 = cols.next().unwrap().trim().parse().unwrap();
        if v > 0.0 {
            pos.push(word.clone());
        }
        all.push(word);
    }
    (pos, all)
}

fn random_text(rng: &mut ChaCha8Rng, vocab: &[String]) -> String {
    const MODIFIERS: &[&str] = &["not", "never", "very", "extremely", "barely", "no", "hardly", "so"];
    const NOISE: &[&str] = &["", "!!!", "#tag", "@user", "x", "42", "…", "naïve", "   ", "\n", "ok?"];
    let len = rng.gen_range(0..40);
    let mut words = Vec::with_capacity(len);
    for _ in 0..len {
        let w = match rng.gen_range(0..10) {
            0..=4 => vocab[rng.gen_range(0..vocab.len())].clone(),
            5..=6 => MODIFIERS[rng.gen_range(0..MODIFIERS.len())].to_string(),
            7 => NOISE[rng.gen_range(0..NOISE.len())].to_string(),
            _ => (0..rng.gen_range(1..8)).map(|_| rng.gen_range('a'..='z')).collect(),
        };
        words.push(if rng.gen_bool(0.15) { w.to_uppercase() } else { w });
    }
    words.join(" ")
}

fn criterion_sentiment_contract() -> String {
    let start = Instant::now();
    let lex = SentimentLexicon::bundled();
    let mirrored = lex.map_valences(|v| -v);
    let (positive, vocab) = lexicon_words();
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);

    for i in 0..10_000 {
        let text = if i % 10 == 0 {
            // dense runs of capitalised, boosted positives push the sum far out
            format!("VERY {} ", positive[i % positive.len()].to_uppercase()).repeat(rng.gen_range(1..200))
        } else {
            random_text(&mut rng, &vocab)
        };
        let c = score_sentiment(&text, &lex);
        assert!(c > -1.0 && c < 1.0, "compound {c} for {text:?}");
    }

    for _ in 0..1000 {
        let text = random_text(&mut rng, &vocab);
        let c = score_sentiment(&text, &lex);
        assert_eq!(score_sentiment(&text, &mirrored), -c, "sign symmetry on {text:?}");

        let word = &positive[rng.gen_range(0..positive.len())];
        let longer = format!("{text} zzq zzq zzq {word}");
        assert!(score_sentiment(&longer, &lex) >= c, "appending {word} lowered {text:?}");
    }
    within(Duration::from_secs(10), start);
    "10000 fuzz strings bounded, 1000 symmetry and monotonicity cases".to_string()
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, fn() -> String);

fn main() {
    let criteria: [Criterion; 7] = [
        ("formula oracles", criterion_formula_oracles),
        ("metric consistency", criterion_metric_consistency),
        ("association fixpoint", criterion_association_fixpoint),
        ("signal recovery", criterion_signal_recovery),
        ("classifier properties", criterion_classifier_properties),
        ("determinism", criterion_determinism),
        ("sentiment contract", criterion_sentiment_contract),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({secs:.2}s): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {} {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
