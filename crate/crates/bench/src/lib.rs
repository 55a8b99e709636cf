//! Criterion benchmarks for the isoterm workbench; see `benches/workbench.rs`.
