//! File formats, benchmark harness and command-line front end for `cwm-core`.

pub mod app;
pub mod bench;
pub mod format;
