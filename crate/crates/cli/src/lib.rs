//! Command-line front end: problem specs, residual checks, solves and the
//! bundled self-test.

pub mod commands;
pub mod expr;
pub mod report;
pub mod selftest;
pub mod spec;
