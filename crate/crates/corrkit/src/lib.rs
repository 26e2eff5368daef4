//! File formats and the `corrkit` command line for
//! [`corrkit_core`].

pub mod cli;
pub mod report;
pub mod schema;
