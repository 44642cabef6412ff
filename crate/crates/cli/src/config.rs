//! Effective configuration: defaults, then the `--config` file, then
//! `--set` overrides.

use std::fs;
use std::path::Path;

use headline_core::pipeline::{PipelineConfig, PipelineError};
use serde_json::Value;

/// Relative paths in a config file are taken relative to the file's
/// directory. Paths given with `--set` are relative to the working
/// directory.
pub fn load(config: Option<&Path>, overrides: &[String]) -> Result<PipelineConfig, PipelineError> {
    let mut cfg = match config {
        Some(path) => {
            if !path.exists() {
                return Err(PipelineError::MissingPath {
                    what: "config file",
                    path: path.to_path_buf(),
                });
            }
            let src = fs::read_to_string(path).map_err(|source| PipelineError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            let mut cfg: PipelineConfig = serde_json::from_str(&src)
                .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
            cfg.paths.resolve(path.parent().unwrap_or(Path::new("")));
            cfg
        }
        None => PipelineConfig::default(),
    };
    if !overrides.is_empty() {
        let mut value = serde_json::to_value(&cfg).expect("config serialises");
        for o in overrides {
            apply(&mut value, o)?;
        }
        cfg = serde_json::from_value(value).map_err(|e| PipelineError::Config(e.to_string()))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Apply one `dotted.key=value` override. The value is read as JSON when it
/// parses as JSON and as a plain string otherwise.
pub fn apply(root: &mut Value, assignment: &str) -> Result<(), PipelineError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| PipelineError::Config(format!("--set expects key=value, got `{assignment}`")))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(PipelineError::Config(format!("bad --set key `{key}`")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));

    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let Value::Object(map) = node else {
            let prefix = parts[..i].join(".");
            return Err(PipelineError::Config(format!("`{prefix}` is not a section")));
        };
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("key has at least one part")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    #[test]
    fn overrides_numbers_strings_and_lists() {
        let cfg = load(
            None,
            &[
                "learn.k=5".into(),
                "relevance.keywords_source=title".into(),
                "learn.classifiers=[\"cart\"]".into(),
                "paths.output_dir=runs/a".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.learn.k, 5);
        assert_eq!(serde_json::to_value(cfg.relevance.keywords_source).unwrap(), "title");
        assert_eq!(cfg.learn.classifiers.len(), 1);
        assert_eq!(cfg.paths.output_dir, PathBuf::from("runs/a"));
    }

    #[test]
    fn unknown_keys_and_bad_values_are_config_errors() {
        for bad in ["learn.kk=3", "learn.k=abc", "learn.k=1", "nokey", "learn..k=2", "learn.k.x=2"] {
            let err = load(None, &[bad.to_string()]).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad}: {err}");
        }
    }

    #[test]
    fn config_paths_are_relative_to_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"paths": {"articles": "data/a.jsonl"}, "learn": {"seed": 7}}"#).unwrap();
        let cfg = load(Some(&path), &[]).unwrap();
        assert_eq!(cfg.paths.articles, dir.path().join("data/a.jsonl"));
        assert_eq!(cfg.paths.output_dir, dir.path().join("out"));
        assert_eq!(cfg.learn.seed, 7);
    }

    #[test]
    fn missing_config_file_names_the_path() {
        let err = load(Some(Path::new("/nonexistent/cfg.json")), &[]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("/nonexistent/cfg.json"));
    }
}
