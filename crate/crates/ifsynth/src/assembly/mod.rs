//! From hyper implementations to verified local implementations.

pub mod compose;
pub mod local;
pub mod verify;

pub use compose::{compose, filter_consistent, ComposedState, ComposedSystem, GlobalLetter};
pub use local::{decompose, upstream, ClosedLoop, DecompositionMode, LocalImplementation};
pub use verify::{check_prefix_ifa, verify_closed, ClosedVerdict, IfaVerdict};

#[cfg(test)]
mod tests;
