//! Criterion benchmarks for `matdens`; see `benches/`.
