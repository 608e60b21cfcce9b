//! Datum files, subcommands and randomized self-checks on top of
//! `wdparity-core`.

pub mod commands;
pub mod corpus;
pub mod datum;
pub mod fixtures;
pub mod report;
