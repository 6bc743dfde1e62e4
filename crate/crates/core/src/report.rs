//! Pipelines behind the CLI: spec → symbols → measure → oracle → report.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, CATALOG};
use crate::config::{AnalysisConfig, OracleConfig};
use crate::measure::{decide, window_profile, LineMeasure, Settings, Verdict, WindowProfile};
use crate::oracle::{necessary_condition_scan, sv_scan, NecessaryScan, SigmaTrend, SvScan};
use crate::symbols::{affine_symbols, Classification, MonomialSpec, SpecDocument, SymbolPair};
use crate::{Error, Result, VERSION};

pub const ANALYSIS_SCHEMA: &str = "monop.analysis/1";
pub const CATALOG_SCHEMA: &str = "monop.catalog/1";
pub const ORACLE_SCHEMA: &str = "monop.oracle/1";

/// Probe length for the `‖T xⁿ‖/‖xⁿ‖` scan.
pub const NECESSARY_PROBE: usize = 64;

/// `σ_24(32)` below this reads as compactness evidence.
pub const COMPACT_DECAY_MAX: f64 = 0.05;
/// `σ_16(32)` above this reads as non-compactness evidence.
pub const NONCOMPACT_FLOOR: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct SymbolSummary {
    pub phi: String,
    pub slope: f64,
    /// `β = b + (1 − a)/2`.
    pub beta: f64,
    pub weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intercept_note: Option<String>,
}

impl SymbolSummary {
    fn new(spec: &MonomialSpec, sym: &SymbolPair) -> Self {
        let (a, b, beta) = (spec.slope(), spec.intercept(), sym.intercept());
        SymbolSummary {
            phi: sym.describe_phi(),
            slope: sym.slope(),
            beta,
            weight: spec.weight().map(|w| w.source().to_string()),
            intercept_note: (a != 1.0).then(|| {
                format!(
                    "a = {a} != 1: the intercept of phi is beta = b + (1-a)/2 = {beta}, not b = {b}; \
                     it is what sends the node n+1/2 to p_n+1/2"
                )
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleEvidence {
    /// Galerkin output is corroboration, never proof.
    pub label: &'static str,
    pub mode: String,
    pub scan: SvScan,
    pub necessary: NecessaryScan,
    /// Whether the singular values point the same way as the verdict.
    pub corroborates: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub config_hash: String,
    pub spec: SpecDocument,
    pub symbols: SymbolSummary,
    pub verdict: Verdict,
    /// `(r, sup)` pairs of the vanishing test.
    pub vanishing_trace: Vec<(f64, f64)>,
    pub oracle: Option<OracleEvidence>,
}

impl AnalysisReport {
    pub fn class(&self) -> Classification {
        self.verdict.class
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn corroborates(class: Classification, scan: &SvScan) -> Option<bool> {
    let s = &scan.summary;
    let decay = s.decay.as_ref();
    match class {
        Classification::Compact => decay.and_then(|d| d.sigma_24).map(|v| v < COMPACT_DECAY_MAX),
        Classification::Unbounded => Some(s.trend == SigmaTrend::Growing),
        Classification::BoundedNotCompact => decay
            .and_then(|d| d.sigma_16)
            .map(|v| v > NONCOMPACT_FLOOR && s.trend != SigmaTrend::Growing),
        Classification::Inconclusive => None,
    }
}

fn oracle_evidence(spec: &MonomialSpec, cfg: &OracleConfig, class: Classification) -> Result<Option<OracleEvidence>> {
    if cfg.sizes.is_empty() {
        return Ok(None);
    }
    let scan = sv_scan(spec, &cfg.sizes, cfg.arithmetic())?;
    let necessary = necessary_condition_scan(spec, NECESSARY_PROBE)?;
    Ok(Some(OracleEvidence {
        label: "evidence",
        mode: scan.results.last().map(|r| r.mode.clone()).unwrap_or_default(),
        corroborates: corroborates(class, &scan),
        scan,
        necessary,
    }))
}

pub fn run_analyze(config: &AnalysisConfig) -> Result<AnalysisReport> {
    let spec = MonomialSpec::from_document(&config.spec)?;
    let sym = affine_symbols(&spec);
    let verdict = decide(&spec, &sym, &config.settings());
    let vanishing_trace = verdict
        .evidence
        .vanishing
        .as_ref()
        .map(|v| v.trace.iter().map(|s| (s.r, s.sup)).collect())
        .unwrap_or_default();
    let oracle = oracle_evidence(&spec, &config.oracle, verdict.class)?;
    Ok(AnalysisReport {
        schema: ANALYSIS_SCHEMA,
        tool_version: VERSION,
        config_hash: config.hash(),
        spec: config.spec.clone(),
        symbols: SymbolSummary::new(&spec, &sym),
        verdict,
        vanishing_trace,
        oracle,
    })
}

/// Window profile of the operator's line measure, when it has one.
pub fn run_windows(config: &AnalysisConfig) -> Result<WindowProfile> {
    let spec = MonomialSpec::from_document(&config.spec)?;
    let m = LineMeasure::from_symbols(&affine_symbols(&spec))?;
    Ok(window_profile(&m, &config.search))
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogRow {
    pub name: String,
    pub expected: Classification,
    pub computed: Classification,
    pub matches: bool,
    pub report: AnalysisReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogTable {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub rows: Vec<CatalogRow>,
}

impl CatalogTable {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<12} {:<18} {:<18} match\n", "name", "expected", "computed");
        for r in &self.rows {
            out.push_str(&format!(
                "{:<12} {:<18} {:<18} {}\n",
                r.name,
                format!("{:?}", r.expected),
                format!("{:?}", r.computed),
                if r.matches { "yes" } else { "NO" }
            ));
        }
        let hits = self.rows.iter().filter(|r| r.matches).count();
        out.push_str(&format!("{hits}/{} match\n", self.rows.len()));
        out
    }
}

/// Config used for a catalog entry: the entry's spec plus shared settings.
pub fn catalog_config(name: &str, settings: &Settings, oracle: &OracleConfig) -> Result<AnalysisConfig> {
    let e = catalog::entry(name).ok_or_else(|| Error::Config(format!("unknown catalog entry `{name}`")))?;
    Ok(AnalysisConfig {
        spec: e.document(),
        search: settings.search.clone(),
        thresholds: settings.thresholds.clone(),
        oracle: oracle.clone(),
    })
}

pub fn run_catalog(settings: &Settings, oracle: &OracleConfig, only: Option<&[String]>) -> Result<CatalogTable> {
    let mut names: Vec<&str> = match only {
        Some(list) => {
            for n in list {
                if catalog::entry(n).is_none() {
                    return Err(Error::Config(format!("unknown catalog entry `{n}`")));
                }
            }
            CATALOG
                .iter()
                .map(|e| e.name)
                .filter(|n| list.iter().any(|l| l == n))
                .collect()
        }
        None => CATALOG.iter().map(|e| e.name).collect(),
    };
    names.sort_unstable();
    let rows = names
        .par_iter()
        .map(|&name| {
            let report = run_analyze(&catalog_config(name, settings, oracle)?)?;
            let expected = catalog::entry(name).expect("listed").expected;
            Ok(CatalogRow {
                name: name.into(),
                expected,
                computed: report.class(),
                matches: report.class() == expected,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CatalogTable {
        schema: CATALOG_SCHEMA,
        tool_version: VERSION,
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub config_hash: String,
    pub spec: SpecDocument,
    pub label: &'static str,
    pub scan: SvScan,
}

impl OracleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_oracle(config: &AnalysisConfig) -> Result<OracleReport> {
    let spec = MonomialSpec::from_document(&config.spec)?;
    let scan = sv_scan(&spec, &config.oracle.sizes, config.oracle.arithmetic())?;
    Ok(OracleReport {
        schema: ORACLE_SCHEMA,
        tool_version: VERSION,
        config_hash: config.hash(),
        spec: config.spec.clone(),
        label: "evidence",
        scan,
    })
}
