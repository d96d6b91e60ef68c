//! Experiment drivers shared by the examples and the thin CLI.

pub mod output;
pub mod parabola;
pub mod slender;
pub mod starfish;

pub use output::{BenchRecord, ErrorGrid, GridPoint};
