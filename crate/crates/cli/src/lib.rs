//! Document formats, reports and the command-line surface of dgforge.

pub mod cache;
pub mod commands;
pub mod doc;
pub mod error;
pub mod report;
pub mod shipped;

pub use commands::{execute, Cli, Command, Format};
pub use error::CliError;
pub use report::Report;
