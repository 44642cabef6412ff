//! Linear SVM trained by Pegasos-style sub-gradient descent on the primal.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::{ModelParams, TrainedModel};
use crate::diagnostics::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmConfig {
    pub c: f64,
    pub epochs: usize,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig { c: 1.0, epochs: 200 }
    }
}

/// Per-feature standardisation fitted on training rows. Features with
/// zero variance map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(data: &Dataset) -> Standardizer {
        let d = data.n_features();
        let n = data.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for r in &data.rows {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for r in &data.rows {
            for j in 0..d {
                let dv = r[j] - mean[j];
                var[j] += dv * dv;
            }
        }
        let scale = var.into_iter().map(|v| (v / n).sqrt()).collect();
        Standardizer { mean, scale }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| if *s > 0.0 { (v - m) / s } else { 0.0 })
            .collect()
    }

    pub fn zero_variance(&self) -> impl Iterator<Item = usize> + '_ {
        self.scale.iter().enumerate().filter(|(_, s)| **s == 0.0).map(|(j, _)| j)
    }
}

/// One diagnostic per feature that is constant over `data`.
pub fn zero_variance_diagnostics(data: &Dataset) -> Vec<Diagnostic> {
    Standardizer::fit(data)
        .zero_variance()
        .map(|j| Diagnostic::ZeroVarianceFeature {
            feature: data.feature_names[j].clone(),
        })
        .collect()
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn sign_label(l: u8) -> f64 {
    if l == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `½(‖w‖² + b²) + C Σ max(0, 1 − y(w·x + b))` over standardized rows.
pub fn objective(x: &[Vec<f64>], y: &[f64], w: &[f64], bias: f64, c: f64) -> f64 {
    let reg = 0.5 * (dot(w, w) + bias * bias);
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (1.0 - yi * (dot(w, xi) + bias)).max(0.0))
        .sum();
    reg + c * hinge
}

/// The bias is trained as the weight of a constant input and shares the
/// regulariser. Step size is `1 / (λ t)` with `λ = 1 / (C n)`; rows are
/// reshuffled every epoch from `seed`.
///
/// Sub-gradient steps do not descend monotonically, so the iterate with the
/// lowest objective at an epoch boundary is kept, and the stored trace is
/// that best-so-far objective.
pub fn train_svm(data: &Dataset, cfg: &SvmConfig, seed: u64) -> TrainedModel {
    let standardizer = Standardizer::fit(data);
    let x: Vec<Vec<f64>> = data.rows.iter().map(|r| standardizer.transform(r)).collect();
    let y: Vec<f64> = data.labels.iter().map(|&l| sign_label(l)).collect();
    let n = x.len();
    let d = data.n_features();
    let lambda = 1.0 / (cfg.c * n.max(1) as f64);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![0.0; d];
    let mut bias = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut trace = Vec::with_capacity(cfg.epochs);
    let mut best = (f64::INFINITY, w.clone(), bias);
    let mut t = 0u64;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let decay = 1.0 - 1.0 / t as f64;
            let margin = y[i] * (dot(&w, &x[i]) + bias);
            w.iter_mut().for_each(|wj| *wj *= decay);
            bias *= decay;
            if margin < 1.0 {
                for (wj, xj) in w.iter_mut().zip(&x[i]) {
                    *wj += eta * y[i] * xj;
                }
                bias += eta * y[i];
            }
        }
        let obj = objective(&x, &y, &w, bias, cfg.c);
        if obj < best.0 {
            best = (obj, w.clone(), bias);
        }
        trace.push(best.0);
    }
    let (_, w, bias) = best;

    TrainedModel {
        feature_names: data.feature_names.clone(),
        seed,
        params: ModelParams::LinearSvm {
            config: *cfg,
            standardizer,
            weights: w,
            bias,
            objective: trace,
        },
    }
}

/// Class 1 iff the decision value is strictly positive.
pub fn predict(standardizer: &Standardizer, weights: &[f64], bias: f64, x: &[f64]) -> u8 {
    let z = standardizer.transform(x);
    u8::from(dot(weights, &z) + bias > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_points() -> Dataset {
        Dataset::new(
            vec!["x".into(), "y".into()],
            vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![-1.0, -1.5], vec![-2.0, -1.0]],
            vec![1, 1, 0, 0],
        )
        .unwrap()
    }

    fn trace(m: &TrainedModel) -> &[f64] {
        match &m.params {
            ModelParams::LinearSvm { objective, .. } => objective,
            _ => unreachable!(),
        }
    }

    #[test]
    fn separable_four_points() {
        let d = four_points();
        let m = train_svm(&d, &SvmConfig::default(), 7);
        for (r, &l) in d.rows.iter().zip(&d.labels) {
            assert_eq!(m.predict(r), l);
        }
    }

    #[test]
    fn flipped_labels_flip_every_prediction() {
        let d = four_points();
        let a = train_svm(&d, &SvmConfig::default(), 7);
        let b = train_svm(&d.flipped(), &SvmConfig::default(), 7);
        for x in [[0.5, 0.5], [1.0, 2.0], [-3.0, 1.0], [2.0, -4.0], [-1.0, -1.5]] {
            assert_eq!(a.predict(&x), 1 - b.predict(&x), "{x:?}");
        }
    }

    #[test]
    fn objective_trace_decreases() {
        let m = train_svm(&four_points(), &SvmConfig::default(), 7);
        let t = trace(&m);
        assert_eq!(t.len(), 200);
        assert!(t[t.len() - 1] < t[0]);
        for pair in t[t.len() / 2..].windows(2) {
            assert!(pair[1] <= pair[0], "{pair:?}");
        }
    }

    #[test]
    fn stored_trace_matches_recomputed_objective() {
        let d = four_points();
        let m = train_svm(&d, &SvmConfig::default(), 3);
        let ModelParams::LinearSvm {
            standardizer,
            weights,
            bias,
            objective: tr,
            ..
        } = &m.params
        else {
            unreachable!()
        };
        let x: Vec<Vec<f64>> = d.rows.iter().map(|r| standardizer.transform(r)).collect();
        let y: Vec<f64> = d.labels.iter().map(|&l| sign_label(l)).collect();
        assert_eq!(objective(&x, &y, weights, *bias, 1.0), *tr.last().unwrap());
    }

    #[test]
    fn constant_feature_standardizes_to_zero() {
        let d = Dataset::new(
            vec!["c".into(), "x".into()],
            vec![vec![5.0, 1.0], vec![5.0, -1.0]],
            vec![1, 0],
        )
        .unwrap();
        let s = Standardizer::fit(&d);
        assert_eq!(s.transform(&[5.0, 1.0]), vec![0.0, 1.0]);
        assert_eq!(
            zero_variance_diagnostics(&d),
            vec![Diagnostic::ZeroVarianceFeature { feature: "c".into() }]
        );
    }
}
