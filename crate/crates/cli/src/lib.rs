//! Support library for the `qcdesign` command-line tool.

pub mod file;
