//! Criterion benchmarks for `slnh-core`; see `benches/`.
