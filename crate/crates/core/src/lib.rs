//! Algorithms on free groups of finite rank: Whitehead graphs and
//! minimization, primitivity testing, primitivity-blocking words, orbit
//! blockers, and a streaming decider for the fixed-target conjugacy-orbit
//! membership problem.

pub mod aut;
pub mod blockers;
pub mod error;
pub mod graph;
pub mod hybrid;
pub mod oracle;
pub mod pb2;
pub mod whitehead;
pub mod word;

pub use aut::{EndoMap, WhiteheadAut};
pub use error::{Error, Result};
pub use graph::WhiteheadGraph;
pub use whitehead::MinimizationResult;
pub use word::{CyclicWord, Letter, Word};
