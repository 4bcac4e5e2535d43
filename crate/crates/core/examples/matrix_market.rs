//! Parses a Matrix Market coordinate file (symmetric storage is expanded)
//! and multiplies it on the vector unit. Pass a path to use your own file.

use longvec_lab::inputs::{load_matrix_market, parse_matrix_market};
use longvec_lab::kernels::{spmv_vector, Graph};
use longvec_lab::machine::{MachineConfig, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel};

const SAMPLE: &str = "\
%%MatrixMarket matrix coordinate real symmetric
% 4x4 tridiagonal, lower triangle only
4 4 7
1 1 2.0
2 1 -1.0
2 2 2.0
3 2 -1.0
3 3 2.0
4 3 -1.0
4 4 2.0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = match std::env::args().nth(1) {
        Some(path) => load_matrix_market(path.as_ref())?,
        None => parse_matrix_market(SAMPLE)?,
    };
    println!("{} x {}, {} stored nonzeros", a.n_rows(), a.n_cols(), a.nnz());
    for r in 0..a.n_rows().min(4) {
        println!("  row {r}: {:?}", a.row(r).collect::<Vec<_>>());
    }

    let x = vec![1.0; a.n_cols()];
    let mut ctx = VectorContext::new(MachineConfig::default())?;
    let mut mem = MemoryModel::new(MemoryConfig::default())?;
    let y = spmv_vector(&a, &x, &mut ctx, &mut mem)?;
    println!("A * ones = {:?}", &y[..y.len().min(8)]);

    if a.n_rows() == a.n_cols() {
        let g = Graph::from_pattern(&a)?;
        println!("as a graph: {} vertices, {} edges", g.n_nodes(), g.n_edges());
    }
    Ok(())
}
