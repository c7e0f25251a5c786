//! Command-line front end: input parsing, JSON reports and the self-test
//! suite. The binary in `main.rs` is a thin wrapper around [`run::run`].

pub mod error;
pub mod input;
pub mod json;
pub mod run;
pub mod selftest;
