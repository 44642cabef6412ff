//! Bagged CART trees with per-node feature subsampling.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cart::{grow, CartConfig, Tree};
use super::dataset::Dataset;
use super::{derive_seed, ModelParams, TrainedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubsample {
    /// `ceil(sqrt(d))` features per node.
    Sqrt,
    /// Every feature at every node.
    All,
    Count(usize),
}

impl FeatureSubsample {
    pub fn size(self, d: usize) -> usize {
        let m = match self {
            FeatureSubsample::Sqrt => (d as f64).sqrt().ceil() as usize,
            FeatureSubsample::All => d,
            FeatureSubsample::Count(m) => m,
        };
        m.clamp(1, d.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_features: FeatureSubsample,
    pub bootstrap: bool,
    pub tree: CartConfig,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            max_features: FeatureSubsample::Sqrt,
            bootstrap: true,
            tree: CartConfig::default(),
        }
    }
}

fn train_tree(data: &Dataset, cfg: &ForestConfig, seed: u64) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = data.len();
    let sample: Vec<usize> = if cfg.bootstrap {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    let m = cfg.max_features.size(data.n_features());
    grow(data, &sample, &cfg.tree, &mut |d| {
        if m >= d {
            return (0..d).collect();
        }
        let mut f = index::sample(&mut rng, d, m).into_vec();
        f.sort_unstable();
        f
    })
}

/// Tree `i` draws from its own generator seeded by `derive_seed(seed, i)`,
/// so the result does not depend on scheduling.
pub fn train_forest(data: &Dataset, cfg: &ForestConfig, seed: u64) -> TrainedModel {
    let trees = (0..cfg.n_trees.max(1))
        .into_par_iter()
        .map(|i| train_tree(data, cfg, derive_seed(seed, i as u64)))
        .collect();
    TrainedModel {
        feature_names: data.feature_names.clone(),
        seed,
        params: ModelParams::RandomForest { config: *cfg, trees },
    }
}

/// Majority vote; ties go to class 0.
pub fn vote(trees: &[Tree], x: &[f64]) -> u8 {
    let ones = trees.iter().filter(|t| t.predict(x) == 1).count();
    u8::from(2 * ones > trees.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::cart::{Node, Split};
    use crate::learn::train_cart;

    fn stump(class_left: u8) -> Tree {
        let leaf = |c: u8| Node {
            counts: if c == 1 { [0, 1] } else { [1, 0] },
            split: None,
        };
        Tree {
            nodes: vec![
                Node {
                    counts: [1, 1],
                    split: Some(Split {
                        feature: 0,
                        threshold: 0.0,
                        left: 1,
                        right: 2,
                    }),
                },
                leaf(class_left),
                leaf(1 - class_left),
            ],
        }
    }

    #[test]
    fn majority_vote() {
        let trees = vec![stump(1), stump(1), stump(0)];
        assert_eq!(vote(&trees, &[-1.0]), 1);
        assert_eq!(vote(&trees, &[1.0]), 0);
        assert_eq!(vote(&trees[1..], &[-1.0]), 0, "1-1 tie goes to class 0");
    }

    #[test]
    fn subsample_sizes() {
        assert_eq!(FeatureSubsample::Sqrt.size(8), 3);
        assert_eq!(FeatureSubsample::Sqrt.size(9), 3);
        assert_eq!(FeatureSubsample::Sqrt.size(1), 1);
        assert_eq!(FeatureSubsample::Count(20).size(5), 5);
    }

    fn noisy() -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> = (0..80)
            .map(|_| (0..5).map(|_| rng.gen_range(0..8) as f64).collect())
            .collect();
        let labels = rows
            .iter()
            .map(|r| u8::from(r[1] + r[3] > 7.0) ^ u8::from(rng.gen_bool(0.1)))
            .collect();
        Dataset::new((0..5).map(|i| format!("f{i}")).collect(), rows, labels).unwrap()
    }

    #[test]
    fn same_seed_same_forest() {
        let d = noisy();
        let cfg = ForestConfig {
            n_trees: 15,
            ..ForestConfig::default()
        };
        let a = train_forest(&d, &cfg, 11);
        assert_eq!(a, train_forest(&d, &cfg, 11));
        assert_eq!(a.to_json(), train_forest(&d, &cfg, 11).to_json());
        assert_ne!(a, train_forest(&d, &cfg, 12));
    }

    #[test]
    fn degenerate_forest_matches_cart() {
        let d = noisy();
        let cfg = ForestConfig {
            n_trees: 1,
            bootstrap: false,
            max_features: FeatureSubsample::All,
            tree: CartConfig::default(),
        };
        let f = train_forest(&d, &cfg, 5);
        let c = train_cart(&d, &cfg.tree);
        for r in &d.rows {
            assert_eq!(f.predict(r), c.predict(r));
        }
    }
}
