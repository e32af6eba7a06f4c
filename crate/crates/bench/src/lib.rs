//! Criterion benchmarks for `secst-core`; see `benches/secst.rs`.
