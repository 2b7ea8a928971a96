//! Command-line front end: run configurations, commands and JSON reports.

pub mod commands;
pub mod config;
pub mod report;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}
