//! Library surface of the `er` command-line tool: the graph and matrix
//! file formats, run reports, and the command implementations.

pub mod commands;
pub mod format;
pub mod matrix;
pub mod report;
