//! `monop`: batch front end for the monomial-operator analyzer.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use monop_core::catalog;
use monop_core::config::{AnalysisConfig, OracleConfig, OracleMode};
use monop_core::measure::Settings;
use monop_core::report::{catalog_config, run_analyze, run_catalog, run_oracle, run_windows};
use monop_core::symbols::Classification;
use monop_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "monop",
    version,
    about = "Boundedness and compactness of monomial operators on L²(0,1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on one spec; exit 0 if conclusive, 2 if inconclusive.
    Analyze(Target),
    /// Every built-in entry against its known answer.
    Catalog {
        #[command(flatten)]
        common: Common,
        /// Comma-separated entry names.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Write `<name>.csv` window profiles into this directory.
        #[arg(long, value_name = "DIR")]
        emit_windows: Option<PathBuf>,
    },
    /// Galerkin singular values for one spec.
    Oracle(Target),
    /// Window profile CSV (t, L, mass, ratio) for one spec.
    Windows(Target),
}

#[derive(Args)]
struct Target {
    /// Catalog entry name; alternatively pass --config.
    name: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON config: a full analysis config or a bare spec document.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Galerkin sizes, e.g. 8,16,32.
    #[arg(long = "N", value_name = "LIST", value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_name = "exact|float")]
    mode: Option<String>,
    /// Also write the JSON output here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

impl Common {
    fn apply(&self, oracle: &mut OracleConfig) -> Result<()> {
        if let Some(s) = &self.sizes {
            oracle.sizes = s.clone();
        }
        if let Some(m) = &self.mode {
            oracle.mode = m.parse::<OracleMode>()?;
        }
        Ok(())
    }

    fn emit(&self, text: &str) -> Result<()> {
        println!("{text}");
        if let Some(p) = &self.json {
            fs::write(p, format!("{text}\n"))?;
        }
        Ok(())
    }
}

fn load_target(t: &Target) -> Result<AnalysisConfig> {
    let mut cfg = match (&t.name, &t.common.config) {
        (Some(_), Some(_)) => return Err(Error::Config("give either a catalog name or --config, not both".into())),
        (None, None) => return Err(Error::Config("missing target: a catalog name or --config PATH".into())),
        (None, Some(path)) => AnalysisConfig::load(path)?,
        (Some(name), None) => {
            let names: Vec<&str> = catalog::names().collect();
            catalog_config(name, &Settings::default(), &OracleConfig::default())
                .map_err(|_| Error::Config(format!("unknown catalog entry `{name}`; known: {}", names.join(", "))))?
        }
    };
    t.common.apply(&mut cfg.oracle)?;
    Ok(cfg)
}

/// Settings for a catalog run; the `spec` field of a full config is ignored.
fn load_settings(path: Option<&Path>) -> Result<(Settings, OracleConfig)> {
    let Some(path) = path else {
        return Ok((Settings::default(), OracleConfig::default()));
    };
    let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let settings: Settings = serde_json::from_value(value.clone())?;
    let oracle = match value.get("oracle") {
        Some(o) => serde_json::from_value(o.clone())?,
        None => OracleConfig::default(),
    };
    Ok((settings, oracle))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze(t) => {
            let report = run_analyze(&load_target(&t)?)?;
            t.common.emit(&report.to_json())?;
            Ok(if report.class() == Classification::Inconclusive {
                2
            } else {
                0
            })
        }
        Command::Catalog {
            common,
            only,
            emit_windows,
        } => {
            let (settings, mut oracle) = load_settings(common.config.as_deref())?;
            common.apply(&mut oracle)?;
            let table = run_catalog(&settings, &oracle, only.as_deref())?;
            if let Some(dir) = &emit_windows {
                fs::create_dir_all(dir)?;
                for row in &table.rows {
                    let cfg = catalog_config(&row.name, &settings, &oracle)?;
                    fs::write(dir.join(format!("{}.csv", row.name)), run_windows(&cfg)?.to_csv())?;
                }
            }
            eprint!("{}", table.to_text());
            common.emit(&table.to_json())?;
            Ok(if table.all_match() { 0 } else { 2 })
        }
        Command::Oracle(t) => {
            let report = run_oracle(&load_target(&t)?)?;
            t.common.emit(&report.to_json())?;
            Ok(0)
        }
        Command::Windows(t) => {
            print!("{}", run_windows(&load_target(&t)?)?.to_csv());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.class());
            ExitCode::from(1)
        }
    }
}
