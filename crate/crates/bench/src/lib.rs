//! Criterion benchmarks for coinwalk live in `benches/`.
