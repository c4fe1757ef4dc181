//! Library half of the `fair-noma` command: argument parsers, config files,
//! run manifests and the figure CSV generators, kept out of `main` so they
//! can be tested and fuzzed directly.

// `!(x > 0.0)` is the NaN-rejecting spelling used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod manifest;
pub mod parse;

pub use config::{parse_config, FileConfig};
pub use error::{CliError, Result};
pub use figures::{FigureOptions, FigureRun};
pub use manifest::{parse_manifest, RunManifest};
pub use parse::{parse_db_grid, parse_gains, parse_k_grid};

/// Environment variable naming the default output directory for figures.
pub const OUT_DIR_ENV: &str = "FAIR_NOMA_OUT_DIR";
