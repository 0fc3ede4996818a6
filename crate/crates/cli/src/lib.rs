//! File formats and experiment orchestration on top of `cosparse-core`.

pub mod harness;
pub mod io;
