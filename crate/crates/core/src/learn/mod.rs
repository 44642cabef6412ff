//! Classifiers and cross-validated evaluation.

pub mod cart;
pub mod cv;
pub mod dataset;
pub mod forest;
pub mod metrics;
pub mod report;
pub mod svm;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cart::{train_cart, CartConfig, Tree};
pub use cv::{kfold_cv, stratified_folds, ClassifierReport, EvalReport, FoldMetrics};
pub use dataset::Dataset;
pub use forest::{train_forest, FeatureSubsample, ForestConfig};
pub use metrics::{f_score, metrics, Confusion, Scores};
pub use svm::{train_svm, Standardizer, SvmConfig};

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("dataset is empty")]
    Empty,
    #[error("row {row} has {found} values, expected {expected}")]
    NotRectangular { row: usize, expected: usize, found: usize },
    #[error("row {row} has label {label}, expected 0 or 1")]
    BadLabel { row: usize, label: u8 },
    #[error("row {row}: {message}")]
    BadValue { row: usize, message: String },
    #[error("insufficient class support for k folds (k = {k}, class {class} has {count} rows)")]
    InsufficientSupport { k: usize, class: u8, count: usize },
    #[error("k must be at least 2, got {0}")]
    BadK(usize),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("model file: {0}")]
    ModelFormat(#[from] serde_json::Error),
    #[error("model file version {found}, expected {MODEL_VERSION}")]
    ModelVersion { found: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    #[serde(rename = "rfc")]
    RandomForest,
    #[serde(rename = "svm")]
    LinearSvm,
    Cart,
}

impl ClassifierKind {
    /// Report column order.
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::RandomForest, ClassifierKind::LinearSvm, ClassifierKind::Cart];

    pub fn label(self) -> &'static str {
        match self {
            ClassifierKind::RandomForest => "RFC",
            ClassifierKind::LinearSvm => "SVM",
            ClassifierKind::Cart => "CART",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnParams {
    pub k: usize,
    pub seed: u64,
    pub classifiers: Vec<ClassifierKind>,
    pub cart: CartConfig,
    pub forest: ForestConfig,
    pub svm: SvmConfig,
}

impl Default for LearnParams {
    fn default() -> Self {
        LearnParams {
            k: 10,
            seed: 42,
            classifiers: ClassifierKind::ALL.to_vec(),
            cart: CartConfig::default(),
            forest: ForestConfig::default(),
            svm: SvmConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    Cart { config: CartConfig, tree: Tree },
    RandomForest { config: ForestConfig, trees: Vec<Tree> },
    LinearSvm {
        config: SvmConfig,
        standardizer: Standardizer,
        weights: Vec<f64>,
        bias: f64,
        /// Best primal objective seen up to each epoch.
        objective: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub feature_names: Vec<String>,
    pub seed: u64,
    #[serde(flatten)]
    pub params: ModelParams,
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        match self.params {
            ModelParams::Cart { .. } => ClassifierKind::Cart,
            ModelParams::RandomForest { .. } => ClassifierKind::RandomForest,
            ModelParams::LinearSvm { .. } => ClassifierKind::LinearSvm,
        }
    }

    pub fn predict(&self, x: &[f64]) -> u8 {
        match &self.params {
            ModelParams::Cart { tree, .. } => tree.predict(x),
            ModelParams::RandomForest { trees, .. } => forest::vote(trees, x),
            ModelParams::LinearSvm {
                standardizer,
                weights,
                bias,
                ..
            } => svm::predict(standardizer, weights, *bias, x),
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Persisted<'a> {
            version: u32,
            model: &'a TrainedModel,
        }
        serde_json::to_string(&Persisted {
            version: MODEL_VERSION,
            model: self,
        })
        .expect("model serializes")
    }

    pub fn from_json(src: &str) -> Result<TrainedModel, LearnError> {
        let value: serde_json::Value = serde_json::from_str(src)?;
        let version = value.get("version").and_then(|v| v.as_u64()).unwrap_or(0);
        if version != u64::from(MODEL_VERSION) {
            return Err(LearnError::ModelVersion { found: version });
        }
        let model = value
            .get("model")
            .cloned()
            .ok_or_else(|| serde::de::Error::missing_field("model"))
            .map_err(LearnError::ModelFormat)?;
        Ok(serde_json::from_value(model)?)
    }
}

pub fn train(kind: ClassifierKind, data: &Dataset, params: &LearnParams, seed: u64) -> TrainedModel {
    match kind {
        ClassifierKind::Cart => train_cart(data, &params.cart),
        ClassifierKind::RandomForest => train_forest(data, &params.forest, seed),
        ClassifierKind::LinearSvm => train_svm(data, &params.svm, seed),
    }
}

pub fn persist_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<(), LearnError> {
    let path = path.as_ref();
    fs::write(path, model.to_json()).map_err(|source| LearnError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel, LearnError> {
    let path = path.as_ref();
    let src = fs::read_to_string(path).map_err(|source| LearnError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    TrainedModel::from_json(&src)
}

/// SplitMix64 finaliser over `seed` and a stream index; used to derive
/// independent RNG seeds for trees, folds and repeats.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
