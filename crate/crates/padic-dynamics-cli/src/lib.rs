//! Library surface of the `padyn` binary: spec parsing, record rendering
//! and command execution, separated so tests can drive them in-process.

pub mod experiment;
pub mod records;
pub mod runner;
