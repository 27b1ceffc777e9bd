//! Command-line companion to `planeinv-core`: file parsing, structured
//! reports, and the `check` / `invert` / `generate` / `selftest` subcommands.
//!
//! The library half exists so integration tests can drive the exact command
//! implementations; `main` only adds flag parsing and exit codes.

pub mod commands;
pub mod parse;
pub mod report;

pub use commands::{cmd_check, cmd_generate, cmd_invert, cmd_selftest, GenerateArgs, SelftestArgs};
pub use parse::{parse_document, parse_poly, print_poly, MapDocument, ParseError};
pub use report::{Report, Verdict};
