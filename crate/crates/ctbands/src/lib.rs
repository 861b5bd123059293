//! File formats, threaded sampling and the command-line driver built on
//! [`ctbands_core`].

pub mod cli;
pub mod error;
pub mod formats;
pub mod parallel;

pub use error::CliError;
