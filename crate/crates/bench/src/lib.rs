//! Benchmark harness crate; see `benches/pipeline.rs`.
