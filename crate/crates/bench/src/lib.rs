//! Criterion benchmarks for the exact pipeline live in `benches/`.
