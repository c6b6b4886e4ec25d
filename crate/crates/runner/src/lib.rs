//! Configuration, checkpointing, output and experiment drivers for the
//! `alpha-fluids` command-line runner.

pub mod checkpoint;
pub mod config;
pub mod experiments;
pub mod output;
