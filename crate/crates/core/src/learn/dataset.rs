use std::io::Read;
use std::path::Path;

use super::LearnError;
use crate::features::FeatureMatrix;

/// Rectangular, binary-labelled training data.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    /// Row identifiers; article ids when read from a feature matrix.
    pub ids: Vec<String>,
    /// Feature scheme name, if known.
    pub scheme: Option<String>,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Dataset, LearnError> {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        Dataset::with_ids(feature_names, rows, labels, ids)
    }

    pub fn with_ids(
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<u8>,
        ids: Vec<String>,
    ) -> Result<Dataset, LearnError> {
        assert_eq!(rows.len(), labels.len(), "one label per row");
        assert_eq!(rows.len(), ids.len(), "one id per row");
        let d = feature_names.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(LearnError::NotRectangular {
                    row: i,
                    expected: d,
                    found: r.len(),
                });
            }
            if let Some(v) = r.iter().find(|v| !v.is_finite()) {
                return Err(LearnError::BadValue {
                    row: i,
                    message: format!("non-finite value {v}"),
                });
            }
        }
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l > 1) {
            return Err(LearnError::BadLabel { row: i, label: l });
        }
        Ok(Dataset {
            feature_names,
            rows,
            labels,
            ids,
            scheme: None,
        })
    }

    pub fn from_matrix(m: &FeatureMatrix) -> Dataset {
        let mut d = Dataset::with_ids(
            m.columns.clone(),
            m.rows.iter().map(|r| r.values.clone()).collect(),
            m.rows.iter().map(|r| r.label).collect(),
            m.rows.iter().map(|r| r.article_id.clone()).collect(),
        )
        .expect("feature matrices are rectangular with binary labels");
        d.scheme = Some(m.scheme.name().to_string());
        d
    }

    /// Read a feature CSV (`article_id,<features...>,label`).
    pub fn from_csv<R: Read>(reader: R) -> Result<Dataset, LearnError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr.headers()?.clone();
        let n = header.len();
        if n < 2 || &header[0] != "article_id" || &header[n - 1] != "label" {
            return Err(LearnError::BadValue {
                row: 0,
                message: "header must be article_id,<features...>,label".into(),
            });
        }
        let names: Vec<String> = header.iter().skip(1).take(n - 2).map(String::from).collect();
        let (mut rows, mut labels, mut ids) = (Vec::new(), Vec::new(), Vec::new());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse_err = |message: String| LearnError::BadValue { row: i, message };
            let values = rec
                .iter()
                .skip(1)
                .take(n - 2)
                .map(|s| s.parse::<f64>().map_err(|e| parse_err(format!("`{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let label = rec[n - 1]
                .parse::<u8>()
                .map_err(|e| parse_err(format!("label `{}`: {e}", &rec[n - 1])))?;
            ids.push(rec[0].to_string());
            rows.push(values);
            labels.push(label);
        }
        Dataset::with_ids(names, rows, labels, ids)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Dataset, LearnError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| LearnError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut d = Dataset::from_csv(std::io::BufReader::new(file))?;
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            d.scheme = stem.strip_prefix("features_").map(String::from);
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Rows per class, `[class 0, class 1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            scheme: self.scheme.clone(),
        }
    }

    /// Same rows with every label flipped.
    pub fn flipped(&self) -> Dataset {
        Dataset {
            labels: self.labels.iter().map(|&l| 1 - l).collect(),
            ..self.clone()
        }
    }
}
