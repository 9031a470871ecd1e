//! File formats, reports and the `reidlab` command-line front end for
//! [`reid_core`].

pub mod campaign;
pub mod cli;
pub mod format;
pub mod report;
