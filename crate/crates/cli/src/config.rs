//! Optional JSON experiment file. Every key mirrors a `figure` flag; flags
//! given on the command line win.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::parse::{parse_db_grid, parse_k_grid};

/// A grid written either in the flag syntax (`"0:60:2"`) or as a JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DbGrid {
    Text(String),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KGrid {
    Text(String),
    List(Vec<usize>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub xi_db: Option<DbGrid>,
    pub k_grid: Option<KGrid>,
    pub k: Option<usize>,
    pub beta: Option<f64>,
    pub r0: Option<f64>,
    pub fixed_a: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub plot: Option<bool>,
}

impl DbGrid {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        match self {
            DbGrid::Text(s) => parse_db_grid(s),
            DbGrid::List(v) => {
                let text = v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",");
                if v.is_empty() {
                    return Err(CliError::Usage("xi_db: empty list".into()));
                }
                parse_db_grid(&text)
            }
        }
    }
}

impl KGrid {
    pub fn resolve(&self) -> Result<Vec<usize>> {
        match self {
            KGrid::Text(s) => parse_k_grid(s),
            KGrid::List(v) => {
                if v.is_empty() || v.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(CliError::Usage("k_grid: must be a nonempty increasing list".into()));
                }
                Ok(v.clone())
            }
        }
    }
}

pub fn parse_config(text: &str) -> Result<FileConfig> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
}

pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
