//! Command-line surface for [`augustin_core`]: file ingestion, deterministic
//! CSV/JSON emission, and the oracle-backed validation sweeps behind the
//! `validate` subcommand.
//!
//! # Layout
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`config`] | Run-wide solver settings, enumeration caps, sweep seed |
//! | [`io`] | JSON input formats for channels and distributions |
//! | [`emit`] | Byte-stable CSV/JSON assembly with fixed float formatting |
//! | [`commands`] | One pure function per subcommand, inputs to output string |
//! | [`suites`] | Seeded instance generators and the three validation sweeps |
//!
//! Everything here is plumbing around the core crate: the binary parses
//! flags, loads files, calls one function from [`commands`], and writes the
//! returned string to `--out` or standard output. The library half exists so
//! the integration tests can drive the exact same sweeps in-process.

#![warn(missing_docs)]

pub mod commands;
pub mod config;
pub mod emit;
pub mod io;
pub mod suites;
