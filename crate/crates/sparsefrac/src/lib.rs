//! Experiment harness, file formats and reports on top of `sparsefrac-core`.

pub mod config;
pub mod harness;
pub mod io;
pub mod random;
pub mod report;

pub use sparsefrac_core;
