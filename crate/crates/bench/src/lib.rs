//! Criterion benchmarks for the optimizer live in `benches/`.
