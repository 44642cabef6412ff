//! Stratified k-fold cross-validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::metrics::{Confusion, Scores};
use super::{derive_seed, train, ClassifierKind, LearnError, LearnParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub size: usize,
    pub positives: usize,
    pub confusion: Confusion,
    pub scores: Scores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub classifier: ClassifierKind,
    /// Confusion matrix summed over folds; the headline numbers.
    pub pooled: Confusion,
    pub scores: Scores,
    /// Unweighted mean of the per-fold scores.
    pub fold_average: Scores,
    pub folds: Vec<FoldMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub scheme: Option<String>,
    pub k: usize,
    pub seed: u64,
    pub rows: usize,
    pub positives: usize,
    pub classifiers: Vec<ClassifierReport>,
}

impl EvalReport {
    pub fn classifier(&self, kind: ClassifierKind) -> Option<&ClassifierReport> {
        self.classifiers.iter().find(|c| c.classifier == kind)
    }

    pub fn best_f(&self) -> f64 {
        self.classifiers.iter().map(|c| c.scores.f_score).fold(0.0, f64::max)
    }
}

/// Per class (0 then 1), row indices are shuffled and dealt round-robin
/// into `k` folds. The deal position carries over from class 0 to class 1,
/// so fold sizes differ by at most one. Each fold is returned sorted.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, LearnError> {
    if k < 2 {
        return Err(LearnError::BadK(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0usize;
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.len() < k {
            return Err(LearnError::InsufficientSupport {
                k,
                class,
                count: idx.len(),
            });
        }
        idx.shuffle(&mut rng);
        for i in idx {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

fn mean_scores(folds: &[FoldMetrics]) -> Scores {
    let n = folds.len().max(1) as f64;
    let sum = |f: fn(&Scores) -> f64| folds.iter().map(|m| f(&m.scores)).sum::<f64>() / n;
    Scores {
        precision: sum(|s| s.precision),
        recall: sum(|s| s.recall),
        f_score: sum(|s| s.f_score),
    }
}

/// Model seed for classifier `kind` on fold `fold`.
pub fn model_seed(seed: u64, fold: usize, kind: ClassifierKind) -> u64 {
    derive_seed(derive_seed(seed, fold as u64), kind as u64)
}

pub fn kfold_cv(data: &Dataset, k: usize, params: &LearnParams, seed: u64) -> Result<EvalReport, LearnError> {
    if data.is_empty() {
        return Err(LearnError::Empty);
    }
    let folds = stratified_folds(&data.labels, k, seed)?;
    let train_sets: Vec<Vec<usize>> = (0..k)
        .map(|f| {
            let mut t: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, idx)| idx.iter().copied())
                .collect();
            t.sort_unstable();
            t
        })
        .collect();

    let jobs: Vec<(ClassifierKind, usize)> = params
        .classifiers
        .iter()
        .flat_map(|&c| (0..k).map(move |f| (c, f)))
        .collect();
    let results: Vec<FoldMetrics> = jobs
        .par_iter()
        .map(|&(kind, f)| {
            let model = train(kind, &data.subset(&train_sets[f]), params, model_seed(seed, f, kind));
            let mut confusion = Confusion::default();
            for &i in &folds[f] {
                confusion.record(data.labels[i], model.predict(&data.rows[i]));
            }
            FoldMetrics {
                fold: f,
                size: folds[f].len(),
                positives: folds[f].iter().filter(|&&i| data.labels[i] == 1).count(),
                confusion,
                scores: confusion.scores(),
            }
        })
        .collect();

    let classifiers = params
        .classifiers
        .iter()
        .zip(results.chunks(k))
        .map(|(&classifier, folds)| {
            let mut pooled = Confusion::default();
            folds.iter().for_each(|m| pooled.merge(&m.confusion));
            ClassifierReport {
                classifier,
                pooled,
                scores: pooled.scores(),
                fold_average: mean_scores(folds),
                folds: folds.to_vec(),
            }
        })
        .collect();

    Ok(EvalReport {
        scheme: data.scheme.clone(),
        k,
        seed,
        rows: data.len(),
        positives: data.class_counts()[1],
        classifiers,
    })
}
