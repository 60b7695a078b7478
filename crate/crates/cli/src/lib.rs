//! Command-line front end for `frackw-core`: argument parsing, dispatch,
//! CSV/SVG output and the self-test suites.

pub mod app;
pub mod output;
pub mod selftest;

pub use app::{run, GraphSource, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION};
