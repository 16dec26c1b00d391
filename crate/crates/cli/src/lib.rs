//! Front end for `twistkit-core`: the `.alg` input format, JSON reports and
//! the subcommands behind the `twistkit` binary.

pub mod commands;
pub mod dsl;
pub mod report;
