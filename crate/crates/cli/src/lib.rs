//! Batch front end for OGTT simulation, inference, classification and the
//! stability / identifiability checks.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod patients;
pub mod summary;

pub use config::{CommonArgs, RunConfig};
pub use error::{CliError, Result};
pub use patients::{parse_patients, ParsedPatients};
