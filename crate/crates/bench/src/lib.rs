//! Benchmarks for the `planar-cover` kernels; see `benches/kernels.rs`.
