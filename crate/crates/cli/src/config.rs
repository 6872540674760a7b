//! Engine settings, layered as defaults < config file < `PKN_*` environment
//! variables < command-line flags.

use std::path::Path;

use pkn_core::argumentation::ContradictionRules;
use pkn_core::fuzzy::{FuzzyConfig, QuantifierThresholds};
use pkn_core::query::{QueryOptions, ReasoningOptions};
use pkn_core::reasoner::{ProofParams, StepWeights};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown setting `{0}`")]
    UnknownKey(String),
    #[error("setting `{key}`: cannot read `{value}` as {expected}")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("setting `{key}` must be in {range}, got {value}")]
    OutOfRange {
        key: String,
        value: f64,
        range: &'static str,
    },
    #[error("{path}:{line}: expected `key = value`")]
    BadLine { path: String, line: usize },
    #[error("cannot read config file {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub few: f64,
    pub many: f64,
    pub most: f64,
    pub alpha: f64,
    pub crossfade: f64,
    pub ceiling: f64,
    pub depth: usize,
    pub min_certainty: f64,
    pub undecided_band: f64,
    pub functional: Vec<String>,
    pub weights: StepWeights,
}

impl Default for EngineConfig {
    fn default() -> Self {
        let thresholds = QuantifierThresholds::default();
        let fuzzy = FuzzyConfig::default();
        let proof = ProofParams::default();
        Self {
            few: thresholds.few,
            many: thresholds.many,
            most: thresholds.most,
            alpha: QueryOptions::default().alpha,
            crossfade: fuzzy.crossfade_fraction,
            ceiling: fuzzy.ceiling,
            depth: proof.max_depth,
            min_certainty: proof.min_certainty,
            undecided_band: 0.1,
            functional: Vec::new(),
            weights: proof.weights,
        }
    }
}

/// Every key accepted by [`EngineConfig::set`].
pub const KEYS: &[&str] = &[
    "few",
    "many",
    "most",
    "alpha",
    "crossfade",
    "ceiling",
    "depth",
    "min-certainty",
    "undecided-band",
    "functional",
    "weight.specialization",
    "weight.generalization",
    "weight.similarity",
    "weight.implication-forward",
    "weight.implication-backward",
    "weight.analogy",
];

fn number(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::BadValue {
            key: key.into(),
            value: value.into(),
            expected: "a number",
        })
}

/// A value in (0, 1].
fn fraction(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v = number(key, value)?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(ConfigError::OutOfRange {
            key: key.into(),
            value: v,
            range: "(0, 1]",
        })
    }
}

/// A value in [0, 1].
fn unit(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v = number(key, value)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(ConfigError::OutOfRange {
            key: key.into(),
            value: v,
            range: "[0, 1]",
        })
    }
}

impl EngineConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim();
        match key {
            "few" => self.few = fraction(key, value)?,
            "many" => self.many = fraction(key, value)?,
            "most" => self.most = fraction(key, value)?,
            "alpha" => self.alpha = fraction(key, value)?,
            "crossfade" => self.crossfade = unit(key, value)?,
            "undecided-band" => self.undecided_band = unit(key, value)?,
            "min-certainty" => self.min_certainty = unit(key, value)?,
            "ceiling" => self.ceiling = number(key, value)?,
            "depth" => {
                self.depth = value
                    .trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|d| *d >= 1)
                    .ok_or_else(|| ConfigError::BadValue {
                        key: key.into(),
                        value: value.into(),
                        expected: "a whole number of at least 1",
                    })?
            }
            "functional" => {
                self.functional = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            _ => {
                let w = &mut self.weights;
                let slot = match key {
                    "weight.specialization" => &mut w.specialization,
                    "weight.generalization" => &mut w.generalization,
                    "weight.similarity" => &mut w.similarity,
                    "weight.implication-forward" => &mut w.implication_forward,
                    "weight.implication-backward" => &mut w.implication_backward,
                    "weight.analogy" => &mut w.analogy,
                    _ => return Err(ConfigError::UnknownKey(key.into())),
                };
                *slot = unit(key, value)?;
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::BadLine {
                    path: origin.into(),
                    line: i + 1,
                });
            };
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Applies `PKN_<KEY>` variables, where the key is upper-cased with
    /// `-` and `.` written as `_` (`PKN_MIN_CERTAINTY`,
    /// `PKN_WEIGHT_ANALOGY`). `PKN_CONFIG` names a file and is skipped.
    pub fn apply_env<I, K, V>(&mut self, vars: I) -> Result<(), ConfigError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut found: Vec<(&str, String)> = Vec::new();
        for (k, v) in vars {
            let Some(suffix) = k.as_ref().strip_prefix("PKN_") else {
                continue;
            };
            if suffix == "CONFIG" {
                continue;
            }
            // other tools may share the prefix, so unknown names are skipped
            let Some(key) = KEYS.iter().find(|key| env_name(key) == suffix) else {
                continue;
            };
            found.push((key, v.as_ref().to_string()));
        }
        // environment order is arbitrary; apply in a fixed order
        found.sort();
        for (k, v) in found {
            self.set(k, &v)?;
        }
        Ok(())
    }

    pub fn thresholds(&self) -> QuantifierThresholds {
        QuantifierThresholds {
            few: self.few,
            many: self.many,
            most: self.most,
        }
    }

    pub fn fuzzy(&self) -> FuzzyConfig {
        FuzzyConfig {
            crossfade_fraction: self.crossfade,
            ceiling: self.ceiling,
        }
    }

    pub fn proof_params(&self) -> ProofParams {
        ProofParams {
            max_depth: self.depth,
            min_certainty: self.min_certainty,
            weights: self.weights,
            rules: ContradictionRules::functional(self.functional.iter().cloned()),
            ..ProofParams::default()
        }
    }

    pub fn query_options(&self, reason: bool) -> QueryOptions {
        QueryOptions {
            alpha: self.alpha,
            thresholds: self.thresholds(),
            fuzzy: self.fuzzy(),
            reasoning: reason.then(|| ReasoningOptions {
                params: self.proof_params(),
                ..ReasoningOptions::default()
            }),
        }
    }
}

fn env_name(key: &str) -> String {
    key.to_ascii_uppercase().replace(['-', '.'], "_")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_override_in_order() {
        let mut c = EngineConfig::default();
        c.apply_text("# thresholds\nfew = 0.3\ndepth=4\n", "file")
            .unwrap();
        c.apply_env([("PKN_DEPTH", "5"), ("HOME", "/root")])
            .unwrap();
        assert_eq!((c.few, c.depth), (0.3, 5));
        c.set("depth", "2").unwrap();
        assert_eq!(c.depth, 2);
    }

    #[test]
    fn rejects_bad_settings() {
        let mut c = EngineConfig::default();
        assert!(matches!(
            c.set("few", "0"),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            c.set("depth", "0"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            c.set("speed", "1"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(
            c.apply_text("few 0.2", "f"),
            Err(ConfigError::BadLine { line: 1, .. })
        ));
        assert!(c.apply_env([("PKN_NOPE", "1")]).is_ok());
        assert!(c.apply_env([("PKN_ALPHA", "2")]).is_err());
    }

    #[test]
    fn env_names() {
        let mut c = EngineConfig::default();
        c.apply_env([
            ("PKN_MIN_CERTAINTY", "0.2"),
            ("PKN_WEIGHT_IMPLICATION_BACKWARD", "0.5"),
            ("PKN_FUNCTIONAL", "age, size"),
        ])
        .unwrap();
        assert_eq!(c.min_certainty, 0.2);
        assert_eq!(c.weights.implication_backward, 0.5);
        assert_eq!(c.functional, ["age", "size"]);
        assert!(c.proof_params().rules.is_functional("size"));
    }
}
