//! Command-line front end for the dipole-cavity simulator: argument grammar,
//! run configuration, per-command execution, and the SVG plot writer.

pub mod args;
pub mod commands;
pub mod config;
pub mod svg;
