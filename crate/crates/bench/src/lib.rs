//! Benchmarks for `tori-core`; see `benches/tori.rs`.
