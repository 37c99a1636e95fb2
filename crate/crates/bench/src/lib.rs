//! Benchmarks for the simulators and compilers; see `benches/`.
