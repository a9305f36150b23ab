//! Criterion benchmarks for the context engine and the linear algebra kernels.
