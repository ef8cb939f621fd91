//! Command-line companion to `opsrec-core`: argument parsing, run
//! configuration, file formats, and the command pipeline. The binary in
//! `main.rs` is a thin dispatcher over these modules, which keeps every
//! piece testable as a library.

pub mod args;
pub mod config;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod report;
