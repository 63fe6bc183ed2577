//! File formats, reports, field plots and the command-line tool built on
//! `geodev-core`.

pub mod cli;
pub mod field;
pub mod io;
pub mod render;
pub mod report;
pub mod verify;
