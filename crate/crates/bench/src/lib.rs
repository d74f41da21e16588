//! Criterion benchmarks for the filters live under `benches/`.
