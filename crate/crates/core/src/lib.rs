//! Minimum transversals (blocking sets) of families of k-arborescences.

pub mod arb;
pub mod blocking;
pub mod cli;
pub mod error;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod matroid;
pub mod optstruct;
pub mod oracle;
pub mod tightmat;

pub use error::{Error, Result};
