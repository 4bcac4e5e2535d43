//! Seeded generators.
//!
//! All randomness comes from xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`), whose output is fixed across
//! platforms.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use super::InputError;
use crate::kernels::{ComplexSignal, CsrMatrix, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Matrix,
    Graph,
    Signal,
}

/// Parameters of one generated input. `density` is nonzeros per row for
/// matrices, average out-degree for graphs, and ignored for signals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub density: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Matrix(CsrMatrix),
    Graph(Graph),
    Signal(ComplexSignal),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Generated, InputError> {
        match self.kind {
            GeneratorKind::Matrix => {
                if self.density.is_nan() || self.density < 0.0 || self.density.fract() != 0.0 {
                    return Err(InputError::InvalidSize(format!(
                        "nonzeros per row must be a non-negative integer, got {}",
                        self.density
                    )));
                }
                gen_sparse_matrix(self.n, self.density as usize, self.seed).map(Generated::Matrix)
            }
            GeneratorKind::Graph => gen_graph(self.n, self.density, self.seed).map(Generated::Graph),
            GeneratorKind::Signal => gen_signal(self.n, self.seed).map(Generated::Signal),
        }
    }
}

fn rng(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}

/// Uniform in the open interval (-1, 1).
fn open_unit(r: &mut Xoshiro256StarStar) -> f64 {
    loop {
        let v = r.random_range(-1.0..1.0);
        if v != -1.0 {
            return v;
        }
    }
}

/// Directed uniform random graph with exactly `round(n * avg_degree)` distinct
/// edges and no self-loops, drawn uniformly from all `n * (n - 1)` ordered
/// pairs. Every vertex's expected out-degree is `avg_degree`.
pub fn gen_graph(n: usize, avg_degree: f64, seed: u64) -> Result<Graph, InputError> {
    if n == 0 {
        return Err(InputError::InvalidSize("graph needs at least one node".into()));
    }
    if !(0.0..=(n - 1) as f64).contains(&avg_degree) {
        return Err(InputError::InvalidSize(format!(
            "average degree {avg_degree} must lie in [0, {}]",
            n - 1
        )));
    }
    let edges = (n as f64 * avg_degree).round() as usize;
    let pairs = n * (n - 1);
    let mut r = rng(seed);
    let picked = index::sample(&mut r, pairs, edges.min(pairs));
    let edge_list: Vec<(usize, usize)> = picked
        .into_iter()
        .map(|p| {
            let u = p / (n - 1);
            let w = p % (n - 1);
            (u, if w >= u { w + 1 } else { w })
        })
        .collect();
    Graph::from_edges(n, &edge_list).map_err(|e| InputError::InvalidSize(e.to_string()))
}

/// `n x n` matrix with exactly `min(nnz_per_row, n)` entries per row at
/// distinct uniformly chosen columns, values uniform in (-1, 1).
pub fn gen_sparse_matrix(n: usize, nnz_per_row: usize, seed: u64) -> Result<CsrMatrix, InputError> {
    if n == 0 {
        return Err(InputError::InvalidSize("matrix needs at least one row".into()));
    }
    let k = nnz_per_row.min(n);
    let mut r = rng(seed);
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(n * k);
    let mut values = Vec::with_capacity(n * k);
    row_ptr.push(0);
    for _ in 0..n {
        let mut cols = index::sample(&mut r, n, k).into_vec();
        cols.sort_unstable();
        for c in cols {
            col_idx.push(c);
            values.push(open_unit(&mut r));
        }
        row_ptr.push(col_idx.len());
    }
    CsrMatrix::new(n, n, row_ptr, col_idx, values).map_err(|e| InputError::InvalidSize(e.to_string()))
}

/// Complex signal with real and imaginary parts uniform in (-1, 1).
pub fn gen_signal(n: usize, seed: u64) -> Result<ComplexSignal, InputError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(InputError::InvalidSize(format!(
            "signal length {n} must be a power of two >= 2"
        )));
    }
    let mut r = rng(seed);
    let re = (0..n).map(|_| open_unit(&mut r)).collect();
    let im = (0..n).map(|_| open_unit(&mut r)).collect();
    ComplexSignal::new(re, im).map_err(|e| InputError::InvalidSize(e.to_string()))
}
