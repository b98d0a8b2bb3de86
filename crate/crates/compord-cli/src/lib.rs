//! Library surface of the `compord` command-line tool.
//!
//! Only the document formats live here; the subcommand driver is in the
//! binary. Exposing the formats lets integration tests (and other tools)
//! parse and emit the same canonical files as the binary.

pub mod format;
