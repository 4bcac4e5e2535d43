//! Scalar and long-vector kernels written against the intrinsics API.
//!
//! Every kernel copies its inputs into the simulated memory, runs on the
//! given context, fences, and reads its output back from memory. Floating
//! point sums are always accumulated left to right (vector code uses
//! [`VectorContext::vreduce_ordered`](crate::machine::VectorContext::vreduce_ordered)
//! or per-element accumulators), so scalar and vector results agree bit for
//! bit and do not depend on the vector length.

mod bfs;
mod fft;
mod pagerank;
pub mod reference;
mod spmv;
mod types;

use thiserror::Error;

use crate::machine::MachineError;
use crate::memory::MemoryError;

pub use bfs::{bfs_scalar, bfs_vector};
pub use fft::fft;
pub use pagerank::{pagerank, pagerank_observed, PageRankParams};
pub use spmv::{spmv_scalar, spmv_vector, spmv_vector_with, SpmvStrategy};
pub use types::{ComplexSignal, CsrMatrix, Graph, KernelResult, Payload};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("signal length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("source vertex {src} out of range for {n_nodes} nodes")]
    SourceOutOfRange { src: usize, n_nodes: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no convergence after {iterations} iterations (last L1 change {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Memory(#[from] MemoryError),
}

/// Which implementation of a kernel to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Scalar,
    Vector,
}
