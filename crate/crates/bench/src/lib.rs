//! Criterion benchmarks for the evoca kernels live in `benches/`.
