//! Experiment harness: synthetic block-model graphs, seeded splits, the
//! graph × filter × method × fraction grid, CSV results and summaries.

pub mod config;
pub mod error;
pub mod grid;
pub mod methods;
pub mod report;
pub mod sbm;
pub mod seeds;
pub mod split;

pub use error::{HarnessError, Result};
pub use grid::{run_cell, run_grid, CellResult, ExperimentCell, GraphEntry, GridConfig};
pub use methods::Method;
