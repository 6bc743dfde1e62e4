//! A single JSON document holding the operator and every tunable.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::measure::{SearchConfig, Settings, Thresholds};
use crate::oracle::{Arithmetic, DEFAULT_FLOAT_BITS};
use crate::symbols::SpecDocument;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Exact,
    Float,
}

impl std::str::FromStr for OracleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(OracleMode::Exact),
            "float" => Ok(OracleMode::Float),
            _ => Err(Error::Config(format!("mode must be exact or float, got `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    /// Truncation sizes `N`, strictly increasing. Empty disables the oracle.
    pub sizes: Vec<usize>,
    pub mode: OracleMode,
    pub precision_bits: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            sizes: vec![8, 16, 32],
            mode: OracleMode::Exact,
            precision_bits: DEFAULT_FLOAT_BITS,
        }
    }
}

impl OracleConfig {
    pub fn arithmetic(&self) -> Arithmetic {
        match self.mode {
            OracleMode::Exact => Arithmetic::Exact,
            OracleMode::Float => Arithmetic::Float {
                bits: self.precision_bits,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub spec: SpecDocument,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub oracle: OracleConfig,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConfigOrSpec {
    Config(AnalysisConfig),
    Spec(SpecDocument),
}

impl AnalysisConfig {
    pub fn for_spec(spec: SpecDocument) -> Self {
        AnalysisConfig {
            spec,
            search: SearchConfig::default(),
            thresholds: Thresholds::default(),
            oracle: OracleConfig::default(),
        }
    }

    /// Parses a full config, or a bare spec document with default settings.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match serde_json::from_value::<ConfigOrSpec>(value.clone()) {
            Ok(ConfigOrSpec::Config(c)) => Ok(c),
            Ok(ConfigOrSpec::Spec(s)) => Ok(Self::for_spec(s)),
            // Re-parse strictly for a useful message.
            Err(_) if value.get("spec").is_some() => Err(serde_json::from_value::<AnalysisConfig>(value)
                .err()
                .map(Error::from)
                .unwrap_or_else(|| Error::Config("unreadable config".into()))),
            Err(_) => Err(serde_json::from_value::<SpecDocument>(value)
                .err()
                .map(Error::from)
                .unwrap_or_else(|| Error::Config("unreadable config".into()))),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn settings(&self) -> Settings {
        Settings {
            search: self.search.clone(),
            thresholds: self.thresholds.clone(),
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        crate::oracle::hex_digest(Sha256::digest(text.as_bytes()).as_slice())
    }
}
