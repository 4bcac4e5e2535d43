//! PageRank power iteration with dangling-node redistribution, printing the
//! L1 change of each iterate until convergence.

use longvec_lab::inputs::gen_graph;
use longvec_lab::kernels::{pagerank_observed, PageRankParams, SpmvStrategy, Variant};
use longvec_lab::machine::{MachineConfig, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = gen_graph(2048, 2.0, 5)?;
    let dangling = (0..g.n_nodes()).filter(|&v| g.out_degree(v) == 0).count();
    println!("{} vertices, {dangling} without out-edges", g.n_nodes());

    let params = PageRankParams {
        strategy: SpmvStrategy::RowBlock,
        ..Default::default()
    };
    let mut ctx = VectorContext::new(MachineConfig::default())?;
    let mut mem = MemoryModel::new(MemoryConfig::default())?;
    let mut prev: Option<Vec<f64>> = None;
    let ranks = pagerank_observed(&g, &params, &mut ctx, &mut mem, Variant::Vector, |it, r| {
        if let Some(p) = &prev {
            let delta: f64 = p.iter().zip(r).map(|(a, b)| (a - b).abs()).sum();
            if it % 10 == 0 || delta <= params.tol {
                println!("iteration {it:>3}: L1 change {delta:.3e}");
            }
        }
        prev = Some(r.to_vec());
    })?;

    let mut top: Vec<(usize, f64)> = ranks.iter().copied().enumerate().collect();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("sum of ranks {:.15}", ranks.iter().sum::<f64>());
    println!("top vertices {:?}", &top[..5]);
    println!("{} cycles", ctx.cycle());
    Ok(())
}
