//! Breadth-first search with frontier compaction on the vector unit,
//! compared with the scalar queue version and a host BFS.

use longvec_lab::inputs::gen_graph;
use longvec_lab::kernels::reference::reference_bfs;
use longvec_lab::kernels::{bfs_scalar, bfs_vector};
use longvec_lab::machine::{MachineConfig, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = gen_graph(4096, 16.0, 42)?;
    let want = reference_bfs(&g, 0);

    let mut ctx = VectorContext::new(MachineConfig::default())?;
    let mut mem = MemoryModel::new(MemoryConfig::default())?;
    assert_eq!(bfs_scalar(&g, 0, &mut ctx, &mut mem)?, want);
    let scalar = ctx.cycle();

    let mut ctx = VectorContext::new(MachineConfig::default())?;
    let mut mem = MemoryModel::new(MemoryConfig::default())?;
    assert_eq!(bfs_vector(&g, 0, &mut ctx, &mut mem)?, want);
    let vector = ctx.cycle();

    let depth = want.iter().copied().max().unwrap_or(0);
    let mut per_level = vec![0usize; depth as usize + 1];
    for &d in want.iter().filter(|&&d| d >= 0) {
        per_level[d as usize] += 1;
    }
    println!("{} vertices, {} edges, levels {per_level:?}", g.n_nodes(), g.n_edges());
    println!(
        "scalar {scalar} cycles, vector {vector} cycles ({:.1}x)",
        scalar as f64 / vector as f64
    );
    Ok(())
}
