//! Non-fatal conditions reported alongside stage results.

use serde::{Deserialize, Serialize};

/// A diagnostic record. Serialises to a single-line JSON object tagged by
/// `kind`, e.g. `{"kind":"unresolved_user","user_id":"u9"}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// A tweet references a user id with no profile.
    UnresolvedUser { user_id: String },
    /// Hashtag history for an article was empty; every candidate was
    /// labelled article-specific.
    EmptyHashtagHistory { article_id: String },
    /// A feature had zero variance in the SVM training data and was
    /// standardised to zeros.
    ZeroVarianceFeature { feature: String },
}

impl Diagnostic {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serialises")
    }
}
