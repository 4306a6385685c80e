//! Curve specs, JSON reports and the subcommands of the `qcurve` binary.

pub mod report;
pub mod run;
pub mod spec;
