//! File formats and command-line front end for `armastat-core`.

pub mod cli;
pub mod format;
pub mod output;
