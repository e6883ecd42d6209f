//! Command-line front end for the shiftlab workbench: argument parsing,
//! deterministic reports, run manifests and the reproduction scenarios.

pub mod app;
pub mod report;
pub mod scenarios;
