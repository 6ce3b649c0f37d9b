//! Criterion benchmarks for the fixed-target orbit decider; see
//! `benches/decider.rs`. This crate ships no library code.
