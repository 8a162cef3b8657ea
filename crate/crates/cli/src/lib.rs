//! Batch driver for weak-value scenarios: time series, symmetry reports,
//! parameter sweeps and pointer validation against the exact oracle.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod report;
