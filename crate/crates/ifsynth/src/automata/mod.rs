//! Finite automata over valuations of a vocabulary.

pub mod dfa;
pub mod export;
pub mod guard;
pub mod monitor;
pub mod nfa;

pub use dfa::Dfa;
pub use guard::Guard;
pub use monitor::{ltl_to_monitor, MonitorDfa};
pub use nfa::SymbolicNfa;
