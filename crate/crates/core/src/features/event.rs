//! Event importance: articles linked by shared entities or bigrams form
//! event clusters; an article's cluster size and day span are its
//! features.

use std::collections::{BTreeSet, HashSet};

use chrono::NaiveDate;

use super::baseline::entity_mentions;
use crate::corpus::NewsArticle;
use crate::text;

fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

#[derive(Debug, Clone)]
struct Signature {
    entities: HashSet<String>,
    bigrams: HashSet<String>,
    day: NaiveDate,
}

fn signature(a: &NewsArticle) -> Signature {
    let doc = format!("{}\n{}", a.title, a.body);
    let entities = entity_mentions(&doc)
        .into_iter()
        .map(|e| {
            let e = e.to_lowercase();
            e.strip_suffix("'s").or_else(|| e.strip_suffix("’s")).unwrap_or(&e).to_string()
        })
        .collect();
    let terms = text::terms(&doc);
    let bigrams = terms.windows(2).map(|w| format!("{} {}", w[0], w[1])).collect();
    Signature {
        entities,
        bigrams,
        day: a.day(),
    }
}

/// Pairwise similarity over a fixed article list.
pub struct EventGraph {
    signatures: Vec<Signature>,
    threshold: f64,
}

impl EventGraph {
    pub fn new(articles: &[NewsArticle], threshold: f64) -> Self {
        EventGraph {
            signatures: articles.iter().map(signature).collect(),
            threshold,
        }
    }

    pub fn similar(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.signatures[i], &self.signatures[j]);
        jaccard(&a.entities, &b.entities) >= self.threshold
            || jaccard(&a.bigrams, &b.bigrams) >= self.threshold
    }

    /// Connected-component id of every article.
    pub fn components(&self) -> Vec<usize> {
        let n = self.signatures.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.similar(i, j) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    }

    /// (distinct publication days, articles) of each article's cluster.
    pub fn cluster_stats(&self) -> Vec<(usize, usize)> {
        let comp = self.components();
        comp.iter()
            .map(|&c| {
                let members: Vec<usize> = (0..comp.len()).filter(|&k| comp[k] == c).collect();
                let days: BTreeSet<NaiveDate> = members.iter().map(|&k| self.signatures[k].day).collect();
                (days.len(), members.len())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{DateTime, Utc};

    fn art(id: &str, title: &str, body: &str, day: &str) -> NewsArticle {
        NewsArticle {
            id: id.into(),
            title: title.into(),
            body: body.into(),
            published_at: DateTime::parse_from_rfc3339(&format!("{day}T08:00:00Z")).unwrap().with_timezone(&Utc),
            label: 0,
            section: None,
        }
    }

    #[test]
    fn singleton_cluster() {
        let arts = vec![
            art("a", "Budget passes senate", "The budget passed the senate floor", "2016-08-01"),
            art("b", "Olympic swimmer wins gold", "A swimmer won gold in Rio", "2016-08-01"),
        ];
        assert_eq!(EventGraph::new(&arts, 0.3).cluster_stats(), vec![(1, 1), (1, 1)]);
    }

    #[test]
    fn near_duplicates_over_two_days() {
        let body = "Iran received secret ransom cash payment from Washington officials";
        let arts = vec![
            art("a", "Secret ransom cash payment", body, "2016-08-03"),
            art("b", "Secret ransom cash payment", body, "2016-08-04"),
            art("c", "Secret ransom cash payment grows", body, "2016-08-04"),
            art("d", "Olympic swimmer wins gold", "A swimmer won gold in Rio", "2016-08-04"),
        ];
        let stats = EventGraph::new(&arts, 0.3).cluster_stats();
        assert_eq!(&stats[..3], &[(2, 3), (2, 3), (2, 3)]);
        assert_eq!(stats[3], (1, 1));
    }

    #[test]
    fn similarity_is_symmetric() {
        let arts = vec![
            art("a", "Trump rally in Ohio", "Trump spoke to voters in Ohio about jobs", "2016-08-01"),
            art("b", "Clinton rally in Ohio", "Clinton spoke to voters in Ohio about trade", "2016-08-02"),
            art("c", "Senate budget", "Budget talks stall", "2016-08-02"),
        ];
        let g = EventGraph::new(&arts, 0.3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.similar(i, j), g.similar(j, i));
            }
        }
    }

    #[test]
    fn jaccard_of_empty_sets_is_zero() {
        assert_eq!(jaccard(&HashSet::new(), &HashSet::new()), 0.0);
    }
}
