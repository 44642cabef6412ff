//! Shared workloads for the criterion benchmarks.

use headline_core::features::{assemble_matrix, FeatureParams, Scheme};
use headline_core::learn::Dataset;
use headline_core::lexicons::Lexicons;
use headline_core::pipeline::associate_corpus;
use headline_core::relevance::{ArticleAssociation, RelevanceParams};
use headline_core::synth::{signal_corpus, SignalConfig};
use headline_core::Corpus;

pub struct Workload {
    pub corpus: Corpus,
    pub associations: Vec<ArticleAssociation>,
    pub lexicons: Lexicons,
}

/// Signal corpus with `articles` articles, already associated.
pub fn workload(articles: usize) -> Workload {
    let corpus = signal_corpus(&SignalConfig {
        articles,
        ..SignalConfig::default()
    })
    .corpus();
    let associations = associate_corpus(&corpus, &RelevanceParams::default()).associations;
    Workload {
        corpus,
        associations,
        lexicons: Lexicons::bundled(),
    }
}

impl Workload {
    pub fn dataset(&self, scheme: Scheme) -> Dataset {
        Dataset::from_matrix(&assemble_matrix(
            &self.corpus,
            &self.associations,
            scheme,
            &self.lexicons,
            &FeatureParams::default(),
        ))
    }
}
