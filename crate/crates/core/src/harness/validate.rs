use crate::inputs::{gen_graph, gen_signal, gen_sparse_matrix};
use crate::kernels::reference::{
    dense_matvec, dense_pagerank, max_relative_error, naive_dft, reference_bfs, relative_l2,
};
use crate::kernels::{
    bfs_scalar, bfs_vector, fft, pagerank, spmv_scalar, spmv_vector_with, KernelError, PageRankParams, SpmvStrategy,
    Variant,
};
use crate::machine::{MachineConfig, VectorContext};
use crate::memory::{MemoryConfig, MemoryModel};

use super::HarnessError;

/// One oracle comparison: `error` must not exceed `tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

impl std::fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {}: {:e} (tolerance {:e})",
            self.name, self.error, self.tolerance
        )
    }
}

fn fresh() -> (VectorContext, MemoryModel) {
    (
        VectorContext::new(MachineConfig::default()).expect("default machine is valid"),
        MemoryModel::new(MemoryConfig::default()).expect("default memory is valid"),
    )
}

fn variants() -> [(&'static str, Variant); 2] {
    [("scalar", Variant::Scalar), ("vector", Variant::Vector)]
}

fn kernel_err(e: KernelError) -> HarnessError {
    HarnessError::Config(e.to_string())
}

/// Runs every kernel on small seeded inputs against the dense and naive
/// oracles: SpMV (n = 1024) against a dense product, BFS (2^10 nodes)
/// against a host BFS, PageRank (2^10 nodes) against dense power iteration,
/// FFT (2048 points) against an `O(n^2)` DFT.
pub fn validate_oracles() -> Result<Vec<OracleCheck>, HarnessError> {
    let mut checks = Vec::new();
    let mut push = |name: String, error: f64, tolerance: f64| checks.push(OracleCheck { name, error, tolerance });

    let a = gen_sparse_matrix(1024, 13, 7)?;
    let x: Vec<f64> = (0..1024).map(|i| 1.0 + (i % 7) as f64 / 8.0).collect();
    let want = dense_matvec(&a, &x);
    for (label, strategy) in [
        ("scalar", None),
        ("rowwise", Some(SpmvStrategy::RowWise)),
        ("rowblock", Some(SpmvStrategy::RowBlock)),
    ] {
        let (mut ctx, mut mem) = fresh();
        let y = match strategy {
            None => spmv_scalar(&a, &x, &mut ctx, &mut mem),
            Some(s) => spmv_vector_with(s, &a, &x, &mut ctx, &mut mem),
        }
        .map_err(kernel_err)?;
        push(format!("spmv {label} vs dense"), max_relative_error(&y, &want), 1e-12);
    }

    let g = gen_graph(1 << 10, 16.0, 42)?;
    let want = reference_bfs(&g, 0);
    for (label, variant) in variants() {
        let (mut ctx, mut mem) = fresh();
        let d = match variant {
            Variant::Scalar => bfs_scalar(&g, 0, &mut ctx, &mut mem),
            Variant::Vector => bfs_vector(&g, 0, &mut ctx, &mut mem),
        }
        .map_err(kernel_err)?;
        let wrong = d.iter().zip(&want).filter(|(a, b)| a != b).count() + d.len().abs_diff(want.len());
        push(format!("bfs {label} mismatched vertices"), wrong as f64, 0.0);
    }

    let params = PageRankParams {
        strategy: SpmvStrategy::RowBlock,
        ..Default::default()
    };
    let (want, _) = dense_pagerank(&g, params.damping, params.tol, params.max_iter);
    for (label, variant) in variants() {
        let (mut ctx, mut mem) = fresh();
        let r = pagerank(&g, &params, &mut ctx, &mut mem, variant).map_err(kernel_err)?;
        let linf = r.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        push(format!("pagerank {label} L-inf vs dense"), linf, 1e-8);
        push(
            format!("pagerank {label} |sum - 1|"),
            (r.iter().sum::<f64>() - 1.0).abs(),
            1e-10,
        );
    }

    let s = gen_signal(2048, 3)?;
    let (wr, wi) = naive_dft(&s);
    for (label, variant) in variants() {
        let (mut ctx, mut mem) = fresh();
        let out = fft(&s, &mut ctx, &mut mem, variant).map_err(kernel_err)?;
        push(
            format!("fft {label} relative L2 vs DFT"),
            relative_l2((out.re(), out.im()), (&wr, &wi)),
            1e-9,
        );
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_oracles_pass() {
        let checks = validate_oracles().unwrap();
        assert_eq!(checks.len(), 3 + 2 + 4 + 2);
        for c in &checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}
