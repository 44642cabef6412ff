//! CART: binary trees grown greedily by Gini impurity reduction.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::{ModelParams, TrainedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartConfig {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
}

impl Default for CartConfig {
    fn default() -> Self {
        CartConfig {
            max_depth: 8,
            min_samples_leaf: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    /// Training rows per class reaching this node.
    pub counts: [u64; 2],
    pub split: Option<Split>,
}

impl Node {
    /// Majority class; ties go to class 0.
    pub fn prediction(&self) -> u8 {
        u8::from(self.counts[1] > self.counts[0])
    }

    pub fn gini(&self) -> f64 {
        gini(self.counts)
    }
}

pub fn gini(counts: [u64; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let (p0, p1) = (counts[0] as f64 / n, counts[1] as f64 / n);
    1.0 - p0 * p0 - p1 * p1
}

/// Nodes in pre-order; the root is `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> u8 {
        let mut i = 0;
        while let Some(s) = self.nodes[i].split {
            i = if x[s.feature] <= s.threshold { s.left } else { s.right };
        }
        self.nodes[i].prediction()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            match t.nodes[i].split {
                Some(s) => 1 + go(t, s.left).max(go(t, s.right)),
                None => 0,
            }
        }
        go(self, 0)
    }

    /// `(feature, threshold)` of every split in pre-order.
    pub fn splits(&self) -> Vec<(usize, f64)> {
        self.nodes
            .iter()
            .filter_map(|n| n.split.map(|s| (s.feature, s.threshold)))
            .collect()
    }
}

/// A candidate split scored by its weighted child impurity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub feature: usize,
    pub threshold: f64,
    pub weighted_gini: f64,
    /// Exact score `(l0² + l1²) / nl + (r0² + r1²) / nr` as a fraction;
    /// larger means purer children.
    score: (u128, u128),
}

fn cmp_fraction(a: (u128, u128), b: (u128, u128)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

fn midpoint(a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    if m.is_finite() && a <= m && m < b {
        m
    } else {
        a
    }
}

/// All admissible splits of `sample` on `feature`, in ascending threshold
/// order. `sample` may repeat rows (bootstrap).
pub fn candidates(data: &Dataset, sample: &[usize], feature: usize, min_leaf: usize) -> Vec<Candidate> {
    let mut order: Vec<usize> = sample.to_vec();
    order.sort_by(|&a, &b| data.rows[a][feature].total_cmp(&data.rows[b][feature]));
    let n = order.len() as u128;
    let mut total = [0u128; 2];
    for &i in &order {
        total[data.labels[i] as usize] += 1;
    }
    let mut left = [0u128; 2];
    let mut out = Vec::new();
    for k in 0..order.len().saturating_sub(1) {
        left[data.labels[order[k]] as usize] += 1;
        let (a, b) = (data.rows[order[k]][feature], data.rows[order[k + 1]][feature]);
        if a == b {
            continue;
        }
        let nl = (k + 1) as u128;
        let nr = n - nl;
        if nl < min_leaf as u128 || nr < min_leaf as u128 {
            continue;
        }
        let right = [total[0] - left[0], total[1] - left[1]];
        let sl = left[0] * left[0] + left[1] * left[1];
        let sr = right[0] * right[0] + right[1] * right[1];
        let score = (sl * nr + sr * nl, nl * nr);
        let weighted_gini = 1.0 - (sl as f64 / nl as f64 + sr as f64 / nr as f64) / n as f64;
        out.push(Candidate {
            feature,
            threshold: midpoint(a, b),
            weighted_gini,
            score,
        });
    }
    out
}

/// Tree growth shared by CART and the forest. `features` picks the
/// candidate features (ascending) at each node.
pub(crate) fn grow(
    data: &Dataset,
    sample: &[usize],
    cfg: &CartConfig,
    features: &mut dyn FnMut(usize) -> Vec<usize>,
) -> Tree {
    let mut tree = Tree { nodes: Vec::new() };
    grow_node(data, sample.to_vec(), 0, cfg, features, &mut tree);
    tree
}

fn grow_node(
    data: &Dataset,
    sample: Vec<usize>,
    depth: usize,
    cfg: &CartConfig,
    features: &mut dyn FnMut(usize) -> Vec<usize>,
    tree: &mut Tree,
) -> usize {
    let mut counts = [0u64; 2];
    for &i in &sample {
        counts[data.labels[i] as usize] += 1;
    }
    let id = tree.nodes.len();
    tree.nodes.push(Node { counts, split: None });

    let n = sample.len();
    let pure = counts[0] == 0 || counts[1] == 0;
    if pure || depth >= cfg.max_depth || n < 2 * cfg.min_samples_leaf.max(1) {
        return id;
    }

    let parent = (
        u128::from(counts[0]) * u128::from(counts[0]) + u128::from(counts[1]) * u128::from(counts[1]),
        n as u128,
    );
    let mut best: Option<Candidate> = None;
    for f in features(data.n_features()) {
        for c in candidates(data, &sample, f, cfg.min_samples_leaf.max(1)) {
            let better = match &best {
                None => cmp_fraction(c.score, parent) == Ordering::Greater,
                Some(b) => cmp_fraction(c.score, b.score) == Ordering::Greater,
            };
            if better {
                best = Some(c);
            }
        }
    }
    let Some(best) = best else {
        return id;
    };

    let (l, r): (Vec<usize>, Vec<usize>) = sample
        .iter()
        .partition(|&&i| data.rows[i][best.feature] <= best.threshold);
    let left = grow_node(data, l, depth + 1, cfg, features, tree);
    let right = grow_node(data, r, depth + 1, cfg, features, tree);
    tree.nodes[id].split = Some(Split {
        feature: best.feature,
        threshold: best.threshold,
        left,
        right,
    });
    id
}

pub fn train_cart(data: &Dataset, cfg: &CartConfig) -> TrainedModel {
    let sample: Vec<usize> = (0..data.len()).collect();
    let tree = grow(data, &sample, cfg, &mut |d| (0..d).collect());
    TrainedModel {
        feature_names: data.feature_names.clone(),
        seed: 0,
        params: ModelParams::Cart { config: *cfg, tree },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tree_of(m: &TrainedModel) -> &Tree {
        match &m.params {
            ModelParams::Cart { tree, .. } => tree,
            _ => unreachable!(),
        }
    }

    fn data(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Dataset {
        let d = rows[0].len();
        Dataset::new((0..d).map(|i| format!("x{i}")).collect(), rows, labels).unwrap()
    }

    #[test]
    fn separable_pair() {
        let d = data(vec![vec![0.0], vec![1.0]], vec![0, 1]);
        let cfg = CartConfig {
            min_samples_leaf: 1,
            ..CartConfig::default()
        };
        let m = train_cart(&d, &cfg);
        assert_eq!(tree_of(&m).splits(), vec![(0, 0.5)]);
        assert_eq!((m.predict(&[0.0]), m.predict(&[1.0])), (0, 1));
    }

    #[test]
    fn identical_rows_give_a_majority_leaf() {
        let d = data(vec![vec![1.0, 2.0]; 5], vec![0, 1, 1, 0, 1]);
        let m = train_cart(&d, &CartConfig::default());
        assert_eq!(tree_of(&m).nodes.len(), 1);
        assert_eq!(m.predict(&[1.0, 2.0]), 1);
    }

    #[test]
    fn tied_leaf_predicts_zero() {
        let d = data(vec![vec![1.0]; 4], vec![0, 1, 1, 0]);
        assert_eq!(train_cart(&d, &CartConfig::default()).predict(&[1.0]), 0);
    }

    #[test]
    fn single_class_is_a_depth_zero_tree() {
        let d = data(vec![vec![1.0], vec![2.0], vec![3.0]], vec![1, 1, 1]);
        let m = train_cart(&d, &CartConfig::default());
        assert_eq!(tree_of(&m).depth(), 0);
        assert_eq!(m.predict(&[-5.0]), 1);
    }

    #[test]
    fn equal_scores_prefer_lower_feature_then_lower_threshold() {
        // both features separate the classes identically
        let d = data(
            vec![vec![1.0, 10.0], vec![2.0, 20.0], vec![3.0, 30.0], vec![4.0, 40.0]],
            vec![0, 0, 1, 1],
        );
        let m = train_cart(&d, &CartConfig { max_depth: 8, min_samples_leaf: 1 });
        assert_eq!(tree_of(&m).splits(), vec![(0, 2.5)]);
    }

    fn arb_data() -> impl Strategy<Value = Dataset> {
        (1usize..4, 4usize..40).prop_flat_map(|(d, n)| {
            (
                proptest::collection::vec(proptest::collection::vec(0u8..6, d), n),
                proptest::collection::vec(0u8..2, n),
            )
                .prop_map(|(rows, labels)| {
                    let rows = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
                    data(rows, labels)
                })
        })
    }

    proptest! {
        #[test]
        fn children_never_raise_weighted_impurity(d in arb_data(), leaf in 1usize..4) {
            let m = train_cart(&d, &CartConfig { max_depth: 8, min_samples_leaf: leaf });
            let t = tree_of(&m);
            for node in &t.nodes {
                if let Some(s) = node.split {
                    let (l, r) = (&t.nodes[s.left], &t.nodes[s.right]);
                    let n = (node.counts[0] + node.counts[1]) as f64;
                    let nl = (l.counts[0] + l.counts[1]) as f64;
                    let nr = (r.counts[0] + r.counts[1]) as f64;
                    prop_assert!(nl * l.gini() + nr * r.gini() < n * node.gini() + 1e-12);
                    prop_assert!(nl >= leaf as f64 && nr >= leaf as f64);
                }
            }
            prop_assert!(t.depth() <= 8);
        }

        #[test]
        fn training_rows_reach_leaves_consistent_with_counts(d in arb_data()) {
            let m = train_cart(&d, &CartConfig::default());
            let t = tree_of(&m);
            let leaves: usize = t.nodes.iter().filter(|n| n.split.is_none()).map(|n| (n.counts[0] + n.counts[1]) as usize).sum();
            prop_assert_eq!(leaves, d.len());
        }
    }
}
