//! File formats, mutation suites, bundled reference runs and the command-line
//! driver built on `scottlab-core`.

pub mod bundle;
pub mod cli;
pub mod format;
pub mod mutation;
