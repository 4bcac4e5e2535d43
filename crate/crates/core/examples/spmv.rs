//! Sparse matrix-vector product: scalar core against each vector
//! formulation, checked against a host reference.

use longvec_lab::inputs::gen_sparse_matrix;
use longvec_lab::kernels::reference::reference_spmv;
use longvec_lab::kernels::{spmv_scalar, spmv_vector_with, SpmvStrategy};
use longvec_lab::machine::{MachineConfig, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = gen_sparse_matrix(2048, 13, 7)?;
    let x: Vec<f64> = (0..a.n_cols()).map(|i| 1.0 + (i % 7) as f64 / 8.0).collect();
    let want = reference_spmv(&a, &x);
    println!("{} x {} matrix, {} nonzeros", a.n_rows(), a.n_cols(), a.nnz());

    let fresh = || -> Result<_, Box<dyn std::error::Error>> {
        Ok((
            VectorContext::new(MachineConfig::default())?,
            MemoryModel::new(MemoryConfig::default())?,
        ))
    };
    let (mut ctx, mut mem) = fresh()?;
    let y = spmv_scalar(&a, &x, &mut ctx, &mut mem)?;
    assert_eq!(y, want);
    println!("{:<10} {:>9} cycles", "scalar", ctx.cycle());

    for strategy in [SpmvStrategy::RowWise, SpmvStrategy::RowBlock] {
        let (mut ctx, mut mem) = fresh()?;
        let y = spmv_vector_with(strategy, &a, &x, &mut ctx, &mut mem)?;
        let err = y.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!(
            "{:<10} {:>9} cycles  max |err| {err:.1e}",
            format!("{strategy:?}"),
            ctx.cycle()
        );
    }
    Ok(())
}
