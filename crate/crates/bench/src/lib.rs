//! Criterion benchmarks for srg-core live in `benches/`.
