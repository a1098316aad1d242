//! Benchmark harness; the kernels live in `benches/`.
