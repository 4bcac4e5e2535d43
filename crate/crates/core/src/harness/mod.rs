//! Experiment driver: runs kernels under swept latency and bandwidth
//! settings and normalises the results into slowdown tables.
//!
//! Every run executes on fresh simulation instances and is repeated
//! (default 5 times). The simulator is deterministic, so the repetitions must
//! agree exactly; any difference is reported as
//! [`HarnessError::Nondeterministic`]. The first repetition's output is
//! checked against a host-side oracle before its timing is used.

mod plot;
mod run;
mod sweep;
mod table;
mod validate;
mod workload;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::inputs::InputError;
use crate::kernels::KernelError;
use crate::machine::MachineError;
use crate::memory::MemoryError;

pub use plot::{emit_plot, render_svg};
pub use run::{check_repetitions, run_experiment, write_runs_csv, RunRecord, RUN_CSV_HEADER};
pub use sweep::{
    run_sweep, sweep_bandwidth, sweep_latency, thread_limit, Sweep, SweepSpec, DEFAULT_BANDWIDTHS,
    DEFAULT_EXTRA_LATENCIES,
};
pub use table::{emit_csv, SlowdownTable, SweepMode};
pub use validate::{validate_oracles, OracleCheck};
pub use workload::{InputSource, Workload};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelId {
    Spmv,
    Bfs,
    PageRank,
    Fft,
}

impl KernelId {
    pub const ALL: [KernelId; 4] = [KernelId::Spmv, KernelId::Bfs, KernelId::PageRank, KernelId::Fft];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelId::Spmv => "spmv",
            KernelId::Bfs => "bfs",
            KernelId::PageRank => "pagerank",
            KernelId::Fft => "fft",
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KernelId::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown kernel '{s}'")))
    }
}

/// One column of a slowdown table: the scalar code, or the vector code
/// with the maximum vector length lowered to `vlmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Implementation {
    Scalar,
    Vector { vlmax: usize },
}

impl Implementation {
    /// `scalar, vl8, vl16, ..., vl256`.
    pub fn standard() -> Vec<Implementation> {
        std::iter::once(Implementation::Scalar)
            .chain([8, 16, 32, 64, 128, 256].map(|vlmax| Implementation::Vector { vlmax }))
            .collect()
    }
}

impl fmt::Display for Implementation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Implementation::Scalar => f.write_str("scalar"),
            Implementation::Vector { vlmax } => write!(f, "vl{vlmax}"),
        }
    }
}

impl FromStr for Implementation {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "scalar" {
            return Ok(Implementation::Scalar);
        }
        s.strip_prefix("vl")
            .and_then(|n| n.parse().ok())
            .filter(|&vlmax| vlmax > 0)
            .map(|vlmax| Implementation::Vector { vlmax })
            .ok_or_else(|| HarnessError::Config(format!("unknown implementation '{s}'")))
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{kernel} ({implementation}) failed: {source}")]
    Kernel {
        kernel: KernelId,
        implementation: Implementation,
        source: KernelError,
    },
    #[error("{kernel} ({implementation}) disagrees with its oracle: {detail}")]
    OracleMismatch {
        kernel: KernelId,
        implementation: Implementation,
        detail: String,
    },
    #[error("repetitions disagree: cycles {cycles:?}")]
    Nondeterministic { cycles: Vec<u64> },
    #[error("{kernel}: checksum {found} differs from {expected} seen under another configuration")]
    InconsistentChecksum {
        kernel: KernelId,
        expected: f64,
        found: f64,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl HarnessError {
    /// Process exit status for the CLI: 2 when a result is wrong or
    /// irreproducible, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::OracleMismatch { .. }
            | HarnessError::Nondeterministic { .. }
            | HarnessError::InconsistentChecksum { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<MachineError> for HarnessError {
    fn from(e: MachineError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

impl From<MemoryError> for HarnessError {
    fn from(e: MemoryError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in KernelId::ALL {
            assert_eq!(k.as_str().parse::<KernelId>().unwrap(), k);
        }
        for i in Implementation::standard() {
            assert_eq!(i.to_string().parse::<Implementation>().unwrap(), i);
        }
        assert!("vl0".parse::<Implementation>().is_err());
        assert!("lu".parse::<KernelId>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(HarnessError::Config("x".into()).exit_code(), 1);
        assert_eq!(HarnessError::Nondeterministic { cycles: vec![1, 2] }.exit_code(), 2);
    }
}
