//! JSON formats and subcommand logic for the `ltonp` command-line tool.

pub mod commands;
pub mod io;
