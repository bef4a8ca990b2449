//! Benchmarks for the OGTT model; see `benches/`.
