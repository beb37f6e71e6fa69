//! Command-line front end for `stratum-core`: the `stratum` binary, the
//! chain file format and the seeded chain generator.

pub mod chainfile;
pub mod cli;
pub mod randchain;
