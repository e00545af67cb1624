//! Empty library crate; the benchmarks live in `benches/`.
