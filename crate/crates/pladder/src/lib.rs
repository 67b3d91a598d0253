//! JSON formats and the command-line front end.

pub mod cli;
pub mod json;
