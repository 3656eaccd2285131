//! Standard-library companion to `hermkos-core`: JSON file formats, report
//! emission and the batteries behind the `verify` command.

pub mod cli;
pub mod json;
pub mod report;
pub mod run;
