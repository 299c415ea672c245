//! IO, file formats, presets, and orchestration for the `nhpp` command-line
//! tool; the sampling itself lives in `nhpp-core`.

pub mod bench;
mod error;
pub mod formats;
pub mod illustration;
pub mod runner;
pub mod spec_file;

pub use error::CliError;
