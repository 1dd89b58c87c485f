//! Command-line experiment runner: height scans, standard figures and
//! single-point queries, written as CSV with a JSON run manifest.

pub mod app;
pub mod config;
pub mod figures;
pub mod manifest;
pub mod scan;

pub use config::{parse_config, parse_str, ConfigError, MediumSpec, QuantityKind, ScanConfig, Spacing};
pub use figures::{render, Figure, FigureOutput, Trace};
pub use manifest::RunManifest;
pub use scan::{run_scan, ScanError, ScanResult};
