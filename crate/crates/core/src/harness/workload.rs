use std::path::PathBuf;
use std::sync::OnceLock;

use super::{HarnessError, Implementation, KernelId};
use crate::inputs::{load_matrix_market, Generated, GeneratorKind, GeneratorSpec};
use crate::kernels::reference::{
    max_relative_error, recursive_fft, reference_bfs, reference_spmv, relative_l2, sparse_pagerank,
};
use crate::kernels::{
    bfs_scalar, bfs_vector, fft, pagerank, spmv_scalar, spmv_vector_with, ComplexSignal, CsrMatrix, Graph, KernelError,
    PageRankParams, Payload, SpmvStrategy, Variant,
};
use crate::machine::VectorContext;
use crate::memory::MemoryModel;

/// Where a workload's input comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Generated(GeneratorSpec),
    /// A Matrix Market file. Graph kernels use its sparsity pattern as the
    /// adjacency structure.
    MatrixFile(PathBuf),
}

impl InputSource {
    /// Full-size inputs: an 11397-row matrix with 13 nonzeros per row, a
    /// 2^15-node graph with average degree 16, and a 2048-point signal.
    pub fn default_for(kernel: KernelId) -> Self {
        let (kind, n, density, seed) = match kernel {
            KernelId::Spmv => (GeneratorKind::Matrix, 11397, 13.0, 7),
            KernelId::Bfs | KernelId::PageRank => (GeneratorKind::Graph, 1 << 15, 16.0, 42),
            KernelId::Fft => (GeneratorKind::Signal, 2048, 0.0, 3),
        };
        InputSource::Generated(GeneratorSpec { kind, n, density, seed })
    }

    /// The default inputs shrunk to a 4096-row matrix and a 2^12-node graph;
    /// the signal keeps 2048 points.
    pub fn scaled_for(kernel: KernelId) -> Self {
        match kernel {
            KernelId::Spmv => Self::default_for(kernel).with_size(4096),
            KernelId::Bfs | KernelId::PageRank => Self::default_for(kernel).with_size(1 << 12),
            KernelId::Fft => Self::default_for(kernel),
        }
    }

    /// Replaces the generator size; files are left alone.
    pub fn with_size(self, n: usize) -> Self {
        match self {
            InputSource::Generated(g) => InputSource::Generated(GeneratorSpec { n, ..g }),
            other => other,
        }
    }

    /// Replaces the generator seed; files are left alone.
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            InputSource::Generated(g) => InputSource::Generated(GeneratorSpec { seed, ..g }),
            other => other,
        }
    }

    /// Short stable identifier, used in run records.
    pub fn id(&self) -> String {
        match self {
            InputSource::Generated(g) => {
                let kind = match g.kind {
                    GeneratorKind::Matrix => "matrix",
                    GeneratorKind::Graph => "graph",
                    GeneratorKind::Signal => "signal",
                };
                format!("{kind}:n={}:density={}:seed={}", g.n, g.density, g.seed)
            }
            InputSource::MatrixFile(p) => format!("file:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone)]
enum Data {
    Matrix { a: CsrMatrix, x: Vec<f64> },
    Graph(Graph),
    Signal(ComplexSignal),
}

/// A kernel bound to a loaded input, plus the kernel parameters the harness
/// uses. The oracle answer is computed on first use and cached.
#[derive(Debug)]
pub struct Workload {
    kernel: KernelId,
    input_id: String,
    data: Data,
    pub spmv_strategy: SpmvStrategy,
    pub pagerank: PageRankParams,
    pub bfs_source: usize,
    oracle: OnceLock<Result<Payload, String>>,
}

impl Workload {
    pub fn load(kernel: KernelId, source: &InputSource) -> Result<Self, HarnessError> {
        let loaded = match source {
            InputSource::Generated(spec) => spec.generate()?,
            InputSource::MatrixFile(path) => Generated::Matrix(load_matrix_market(path)?),
        };
        let config = |m: String| HarnessError::Config(format!("{kernel}: {m}"));
        let data = match (kernel, loaded) {
            (KernelId::Spmv, Generated::Matrix(a)) => {
                let x = spmv_operand(a.n_cols());
                Data::Matrix { a, x }
            }
            (KernelId::Bfs | KernelId::PageRank, Generated::Graph(g)) => Data::Graph(g),
            (KernelId::Bfs | KernelId::PageRank, Generated::Matrix(m)) => {
                Data::Graph(Graph::from_pattern(&m).map_err(|e| config(e.to_string()))?)
            }
            (KernelId::Fft, Generated::Signal(s)) => Data::Signal(s),
            _ => return Err(config(format!("input {} has the wrong kind", source.id()))),
        };
        if let Data::Graph(g) = &data {
            if g.n_nodes() == 0 {
                return Err(config("graph has no vertices".into()));
            }
        }
        Ok(Self {
            kernel,
            input_id: source.id(),
            data,
            spmv_strategy: SpmvStrategy::RowBlock,
            pagerank: PageRankParams {
                strategy: SpmvStrategy::RowBlock,
                ..Default::default()
            },
            bfs_source: 0,
            oracle: OnceLock::new(),
        })
    }

    pub fn kernel(&self) -> KernelId {
        self.kernel
    }

    pub fn input_id(&self) -> &str {
        &self.input_id
    }

    /// Runs the kernel once on `ctx` and `mem`. The caller has already set
    /// the context's maximum vector length.
    pub fn execute(
        &self,
        implementation: Implementation,
        ctx: &mut VectorContext,
        mem: &mut MemoryModel,
    ) -> Result<Payload, KernelError> {
        let variant = match implementation {
            Implementation::Scalar => Variant::Scalar,
            Implementation::Vector { .. } => Variant::Vector,
        };
        Ok(match (&self.data, self.kernel) {
            (Data::Matrix { a, x }, _) => Payload::Vector(match variant {
                Variant::Scalar => spmv_scalar(a, x, ctx, mem)?,
                Variant::Vector => spmv_vector_with(self.spmv_strategy, a, x, ctx, mem)?,
            }),
            (Data::Graph(g), KernelId::Bfs) => Payload::Distances(match variant {
                Variant::Scalar => bfs_scalar(g, self.bfs_source, ctx, mem)?,
                Variant::Vector => bfs_vector(g, self.bfs_source, ctx, mem)?,
            }),
            (Data::Graph(g), _) => Payload::Ranks(pagerank(g, &self.pagerank, ctx, mem, variant)?),
            (Data::Signal(s), _) => Payload::Spectrum(fft(s, ctx, mem, variant)?),
        })
    }

    /// Compares a kernel output with the host-side oracle: SpMV to 1e-12
    /// relative error, BFS exactly, PageRank to 1e-8 absolute error, FFT to
    /// 1e-9 relative L2 error.
    pub fn check(&self, out: &Payload) -> Result<(), String> {
        let want = self.oracle().as_ref().map_err(Clone::clone)?;
        match (out, want) {
            (Payload::Vector(y), Payload::Vector(w)) => {
                let err = max_relative_error(y, w);
                (err <= 1e-12)
                    .then_some(())
                    .ok_or(format!("max relative error {err:e} > 1e-12"))
            }
            (Payload::Distances(d), Payload::Distances(w)) => match d.iter().zip(w).position(|(a, b)| a != b) {
                None if d.len() == w.len() => Ok(()),
                None => Err("distance vector has the wrong length".into()),
                Some(v) => Err(format!("vertex {v}: distance {} instead of {}", d[v], w[v])),
            },
            (Payload::Ranks(r), Payload::Ranks(w)) => {
                let err = r.iter().zip(w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                (r.len() == w.len() && err <= 1e-8)
                    .then_some(())
                    .ok_or(format!("max rank error {err:e} > 1e-8"))
            }
            (Payload::Spectrum(s), Payload::Spectrum(w)) => {
                let err = relative_l2((s.re(), s.im()), (w.re(), w.im()));
                (err <= 1e-9)
                    .then_some(())
                    .ok_or(format!("relative L2 error {err:e} > 1e-9"))
            }
            _ => Err("output has the wrong shape".into()),
        }
    }

    fn oracle(&self) -> &Result<Payload, String> {
        self.oracle.get_or_init(|| match &self.data {
            Data::Matrix { a, x } => Ok(Payload::Vector(reference_spmv(a, x))),
            Data::Graph(g) if self.kernel == KernelId::Bfs => {
                if self.bfs_source >= g.n_nodes() {
                    return Err(format!("source {} out of range", self.bfs_source));
                }
                Ok(Payload::Distances(reference_bfs(g, self.bfs_source)))
            }
            Data::Graph(g) => {
                let p = &self.pagerank;
                sparse_pagerank(g, p.damping, p.tol, p.max_iter)
                    .map(|(r, _)| Payload::Ranks(r))
                    .ok_or_else(|| "oracle power iteration did not converge".into())
            }
            Data::Signal(s) => {
                let (re, im) = recursive_fft(s.re(), s.im());
                ComplexSignal::new(re, im)
                    .map(Payload::Spectrum)
                    .map_err(|e| e.to_string())
            }
        })
    }
}

/// The SpMV operand `x[i] = 1 + (i mod 7) / 8`.
fn spmv_operand(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 + (i % 7) as f64 / 8.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_mismatch_is_a_config_error() {
        let src = InputSource::default_for(KernelId::Fft);
        assert!(matches!(
            Workload::load(KernelId::Spmv, &src),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn scaled_sizes() {
        let id = |k| InputSource::scaled_for(k).id();
        assert_eq!(id(KernelId::Spmv), "matrix:n=4096:density=13:seed=7");
        assert_eq!(id(KernelId::Bfs), "graph:n=4096:density=16:seed=42");
        assert_eq!(id(KernelId::Fft), "signal:n=2048:density=0:seed=3");
    }

    #[test]
    fn check_rejects_a_wrong_answer() {
        let src = InputSource::default_for(KernelId::Bfs).with_size(64);
        let w = Workload::load(KernelId::Bfs, &src).unwrap();
        let Data::Graph(g) = &w.data else { unreachable!() };
        let mut d = reference_bfs(g, 0);
        assert!(w.check(&Payload::Distances(d.clone())).is_ok());
        d[5] += 1;
        assert!(w.check(&Payload::Distances(d)).is_err());
    }
}
