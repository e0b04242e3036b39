//! Criterion benchmarks for parrondo-core; see `benches/`.
