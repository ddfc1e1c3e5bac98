//! Digital evolution of self-replicating programs on configurable virtual
//! CPUs.

pub mod analysis;
pub mod environment;
pub mod error;
pub mod isa;
pub mod organism;
pub mod population;
pub mod rng;
pub mod runner;
pub mod vcpu;

pub use error::{Error, Result};
