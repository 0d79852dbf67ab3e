//! Benchmark-only crate; see `benches/eldef.rs`.
