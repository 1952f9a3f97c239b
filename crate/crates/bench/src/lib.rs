//! Benchmark-only crate; see `benches/obstruction.rs`.
