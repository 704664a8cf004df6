//! Criterion benchmarks for the verification engine live in `benches/`.
