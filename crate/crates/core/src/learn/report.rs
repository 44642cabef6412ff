//! Aggregation over repeated runs and the Markdown rendering.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::cv::EvalReport;
use super::ClassifierKind;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    pub fn of(xs: &[f64]) -> Spread {
        if xs.is_empty() {
            return Spread::default();
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Spread {
            mean,
            std,
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSummary {
    pub classifier: ClassifierKind,
    pub precision: Spread,
    pub recall: Spread,
    pub f_score: Spread,
}

/// Every run of one scheme, one run per seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeEvaluation {
    pub scheme: String,
    pub seeds: Vec<u64>,
    pub summary: Vec<ClassifierSummary>,
    pub runs: Vec<EvalReport>,
}

impl SchemeEvaluation {
    pub fn new(scheme: &str, runs: Vec<EvalReport>) -> SchemeEvaluation {
        let kinds: Vec<ClassifierKind> = runs
            .first()
            .map(|r| r.classifiers.iter().map(|c| c.classifier).collect())
            .unwrap_or_default();
        let summary = kinds
            .into_iter()
            .map(|kind| {
                let pick = |f: fn(&super::Scores) -> f64| -> Vec<f64> {
                    runs.iter()
                        .filter_map(|r| r.classifier(kind))
                        .map(|c| f(&c.scores))
                        .collect()
                };
                ClassifierSummary {
                    classifier: kind,
                    precision: Spread::of(&pick(|s| s.precision)),
                    recall: Spread::of(&pick(|s| s.recall)),
                    f_score: Spread::of(&pick(|s| s.f_score)),
                }
            })
            .collect();
        SchemeEvaluation {
            scheme: scheme.to_string(),
            seeds: runs.iter().map(|r| r.seed).collect(),
            summary,
            runs,
        }
    }

    pub fn best_f(&self) -> f64 {
        self.summary.iter().map(|s| s.f_score.mean).fold(0.0, f64::max)
    }
}

fn cell(s: &Spread, repeated: bool) -> String {
    if repeated {
        format!("{:.1} ± {:.1}", s.mean, s.std)
    } else {
        format!("{:.1}", s.mean)
    }
}

type Column = fn(&ClassifierSummary) -> &Spread;

/// Per scheme a Precision/Recall/F-score by classifier table, then an
/// F-score overview across schemes.
pub fn render_markdown(evals: &[SchemeEvaluation]) -> String {
    let mut md = String::from("# Evaluation\n");
    for e in evals {
        let repeated = e.seeds.len() > 1;
        let Some(first) = e.runs.first() else { continue };
        let _ = writeln!(md, "\n## {}\n", e.scheme);
        let header: Vec<&str> = e.summary.iter().map(|s| s.classifier.label()).collect();
        let _ = writeln!(md, "| | {} |", header.join(" | "));
        let _ = writeln!(md, "|---|{}", "---|".repeat(header.len()));
        let rows: [(&str, Column); 3] = [
            ("Precision", |s| &s.precision),
            ("Recall", |s| &s.recall),
            ("F-score", |s| &s.f_score),
        ];
        for (name, get) in rows {
            let cells: Vec<String> = e.summary.iter().map(|s| cell(get(s), repeated)).collect();
            let _ = writeln!(md, "| {name} | {} |", cells.join(" | "));
        }
        let _ = writeln!(
            md,
            "\n{} rows ({} positive), {}-fold stratified CV, pooled confusion matrix; seeds: {}.",
            first.rows,
            first.positives,
            first.k,
            e.seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        );
    }

    if evals.len() > 1 {
        md.push_str("\n## F-score by scheme\n\n| Scheme | RFC | SVM | CART |\n|---|---|---|---|\n");
        for e in evals {
            let cells: Vec<String> = ClassifierKind::ALL
                .iter()
                .map(|k| {
                    e.summary
                        .iter()
                        .find(|s| s.classifier == *k)
                        .map_or("-".to_string(), |s| cell(&s.f_score, e.seeds.len() > 1))
                })
                .collect();
            let _ = writeln!(md, "| {} | {} |", e.scheme, cells.join(" | "));
        }
    }
    md
}
