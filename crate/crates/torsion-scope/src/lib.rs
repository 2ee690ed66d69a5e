//! File formats, resource limits and command implementations behind the
//! `torsion-scope` binary.
//!
//! Every command returns a [`RunRecord`]; the binary only parses flags,
//! prints the record and picks an exit code.

pub mod catalog_io;
pub mod commands;
pub mod error;
pub mod limits;
pub mod record;

pub use catalog_io::{load_catalog, parse_catalog, save_catalog, CatalogError};
pub use commands::{GroupSource, Theorem};
pub use error::CliError;
pub use limits::Limits;
pub use record::RunRecord;
