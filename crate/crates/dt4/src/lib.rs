//! File formats, the result cache and the command implementations behind
//! the `dt4` binary.

pub mod cache;
pub mod commands;
pub mod formats;
pub mod golden;
