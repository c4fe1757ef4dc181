//! Run manifests: a JSON record written next to every figure CSV, from
//! which the CSV can be regenerated bit-for-bit.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fair_noma::mcsim::SimConfig;

use crate::error::{CliError, Result};
use crate::figures::FigureRun;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: String,
    pub figure: u8,
    pub config: SimConfig,
    pub xi_db_grid: Vec<f64>,
    pub k_grid: Vec<usize>,
    pub tool_version: String,
    pub timestamp: String,
    pub output_paths: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(run: &FigureRun, output_paths: Vec<PathBuf>) -> Self {
        RunManifest {
            command: "figure".into(),
            figure: run.figure,
            config: run.config.clone(),
            xi_db_grid: run.xi_db_grid.clone(),
            k_grid: run.k_grid.clone(),
            tool_version: TOOL_VERSION.into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            output_paths,
        }
    }

    pub fn run(&self) -> Result<FigureRun> {
        if self.command != "figure" {
            return Err(CliError::Usage(format!("manifest: unsupported command '{}'", self.command)));
        }
        let run = FigureRun {
            figure: self.figure,
            config: self.config.clone(),
            xi_db_grid: self.xi_db_grid.clone(),
            k_grid: self.k_grid.clone(),
        };
        run.validate()?;
        Ok(run)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Parses and validates a manifest.
pub fn parse_manifest(text: &str) -> Result<RunManifest> {
    let m: RunManifest = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("manifest: {e}")))?;
    m.run()?;
    Ok(m)
}

pub fn load_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_manifest(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::FigureOptions;

    #[test]
    fn round_trip() {
        let opts = FigureOptions {
            xi_db: Some(vec![0.0, 0.1, 17.3]),
            fixed_a: Some(0.3),
            ..Default::default()
        };
        let run = FigureRun::new(4, &opts).unwrap();
        let m = RunManifest::new(&run, vec!["out/fig4.csv".into()]);
        let back = parse_manifest(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.run().unwrap(), run);
        for (a, b) in back.config.xi_grid.iter().zip(&run.config.xi_grid) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_inconsistent_manifests() {
        let run = FigureRun::new(1, &FigureOptions::default()).unwrap();
        let mut m = RunManifest::new(&run, vec![]);
        m.figure = 6;
        assert!(parse_manifest(&m.to_json()).is_err());
        let mut m = RunManifest::new(&run, vec![]);
        m.command = "region".into();
        assert!(parse_manifest(&m.to_json()).is_err());
        let mut m = RunManifest::new(&run, vec![]);
        m.xi_db_grid.pop();
        assert!(parse_manifest(&m.to_json()).is_err());
        assert!(parse_manifest("{}").is_err());
    }
}
