pub mod assembly;
pub mod automata;
pub mod benchmarks;
pub mod classes;
pub mod cli;
pub mod distinguishability;
pub mod error;
pub mod ltl;
pub mod obligations;
pub mod pipeline;
pub mod spec;
pub mod synthesis;
pub mod vars;

pub use error::{Error, Result};
