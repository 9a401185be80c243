//! JSON formats and the command-line frontend for `sqfree-core`.

pub mod cli;
pub mod formats;
