//! File formats, a parallel enumeration driver and the command line front
//! end for [`ybe_core`].

pub mod cli;
pub mod format;
pub mod parallel;
