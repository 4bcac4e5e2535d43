use super::spmv::{load_at, spmv_placed, store_at, PlacedCsr};
use super::{Graph, KernelError, SpmvStrategy, Variant};
use crate::machine::{AluOp, ReduceOp, Scalar, Stride, VectorContext};
use crate::memory::MemoryModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankParams {
    pub damping: f64,
    /// Stop once the L1 change between iterations is at most `tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// SpMV formulation used by the vector variant.
    pub strategy: SpmvStrategy,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 1000,
            strategy: SpmvStrategy::RowWise,
        }
    }
}

impl PageRankParams {
    pub fn validate(&self) -> Result<(), KernelError> {
        let bad = |m: String| Err(KernelError::InvalidParameter(m));
        if self.damping.is_nan() || self.damping <= 0.0 || self.damping >= 1.0 {
            return bad(format!("damping {} must lie in (0, 1)", self.damping));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return bad(format!("tolerance {} must be positive", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be >= 1".into());
        }
        Ok(())
    }
}

/// Power-iteration PageRank with uniform redistribution of dangling mass:
///
/// `r'[v] = (1 - d) / N + d * (sum over u -> v of r[u] / outdeg(u) + D / N)`
///
/// where `D` is the total rank of vertices without out-edges. The link sum is
/// an SpMV over the transposed, column-normalised adjacency matrix.
pub fn pagerank(
    g: &Graph,
    params: &PageRankParams,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
    variant: Variant,
) -> Result<Vec<f64>, KernelError> {
    pagerank_observed(g, params, ctx, mem, variant, |_, _| {})
}

/// [`pagerank`] that also hands every iterate to `observe(iteration, ranks)`.
pub fn pagerank_observed(
    g: &Graph,
    params: &PageRankParams,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
    variant: Variant,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<Vec<f64>, KernelError> {
    params.validate()?;
    let n = g.n_nodes();
    if n == 0 {
        return Err(KernelError::InvalidInput("graph has no vertices".into()));
    }
    let inv_n = 1.0 / n as f64;
    let a = PlacedCsr::place(&g.transition_matrix(), mem);
    let mut rank = mem.alloc_f64(&vec![inv_n; n]);
    let mut rank_next = mem.alloc_zeroed(n);
    let links = mem.alloc_zeroed(n);
    let dangling_flags: Vec<f64> = g
        .out_degrees()
        .iter()
        .map(|&d| if d == 0 { 1.0 } else { 0.0 })
        .collect();
    let flags = mem.alloc_f64(&dangling_flags);

    let c = Constants {
        damping: Scalar::f64(params.damping),
        base: Scalar::f64((1.0 - params.damping) * inv_n),
        inv_n: Scalar::f64(inv_n),
    };
    let strategy = match variant {
        Variant::Scalar => None,
        Variant::Vector => Some(params.strategy),
    };
    let mut residual = f64::INFINITY;
    for iter in 1..=params.max_iter {
        let dangling = match variant {
            Variant::Scalar => dangling_scalar(n, rank, flags, ctx, mem)?,
            Variant::Vector => dangling_vector(n, rank, flags, ctx, mem)?,
        };
        spmv_placed(&a, rank, links, strategy, ctx, mem)?;
        let spread = ctx.scalar_op(AluOp::FMul, dangling, c.inv_n);
        let bufs = Buffers { rank, rank_next, links };
        let diff = match variant {
            Variant::Scalar => update_scalar(n, &bufs, spread, &c, ctx, mem)?,
            Variant::Vector => update_vector(n, &bufs, spread, &c, ctx, mem)?,
        };
        // the loop exit depends on the residual
        ctx.wait_for(diff);
        std::mem::swap(&mut rank, &mut rank_next);
        observe(iter, &mem.read_f64s(rank, n)?);
        residual = diff.as_f64();
        if residual <= params.tol {
            ctx.fence();
            return Ok(mem.read_f64s(rank, n)?);
        }
    }
    Err(KernelError::NotConverged {
        iterations: params.max_iter,
        residual,
    })
}

struct Constants {
    damping: Scalar,
    base: Scalar,
    inv_n: Scalar,
}

struct Buffers {
    rank: u64,
    rank_next: u64,
    links: u64,
}

fn dangling_scalar(
    n: usize,
    rank: u64,
    flags: u64,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Scalar, KernelError> {
    let mut acc = Scalar::f64(0.0);
    for i in 0..n as u64 {
        let r = load_at(ctx, mem, rank, Scalar::u64(i))?;
        let f = load_at(ctx, mem, flags, Scalar::u64(i))?;
        let p = ctx.scalar_op(AluOp::FMul, r, f);
        acc = ctx.scalar_op(AluOp::FAdd, acc, p);
        ctx.scalar_overhead(1);
    }
    Ok(acc)
}

fn dangling_vector(
    n: usize,
    rank: u64,
    flags: u64,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Scalar, KernelError> {
    let mut acc = Scalar::f64(0.0);
    let mut i = 0;
    while i < n {
        let vl = ctx.set_vl(n - i);
        let off = 8 * i as u64;
        let r = ctx.vload(mem, rank + off, Stride::Unit, None)?;
        let f = ctx.vload(mem, flags + off, Stride::Unit, None)?;
        let p = ctx.valu(AluOp::FMul, &r, &f, None)?;
        acc = ctx.vreduce_ordered(ReduceOp::FSum, &p, acc)?;
        i += vl;
        ctx.scalar_overhead(1);
    }
    Ok(acc)
}

/// Writes the next iterate and returns its L1 distance from the current one.
fn update_scalar(
    n: usize,
    b: &Buffers,
    spread: Scalar,
    c: &Constants,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Scalar, KernelError> {
    let mut diff = Scalar::f64(0.0);
    for i in 0..n as u64 {
        let i = Scalar::u64(i);
        let y = load_at(ctx, mem, b.links, i)?;
        let t = ctx.scalar_op(AluOp::FAdd, y, spread);
        let t = ctx.scalar_op(AluOp::FMul, t, c.damping);
        let t = ctx.scalar_op(AluOp::FAdd, t, c.base);
        store_at(ctx, mem, b.rank_next, i, t)?;
        let old = load_at(ctx, mem, b.rank, i)?;
        let up = ctx.scalar_op(AluOp::FSub, t, old);
        let down = ctx.scalar_op(AluOp::FSub, old, t);
        let abs = ctx.scalar_op(AluOp::FMax, up, down);
        diff = ctx.scalar_op(AluOp::FAdd, diff, abs);
        ctx.scalar_overhead(1);
    }
    Ok(diff)
}

fn update_vector(
    n: usize,
    b: &Buffers,
    spread: Scalar,
    c: &Constants,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Scalar, KernelError> {
    let mut diff = Scalar::f64(0.0);
    let mut i = 0;
    while i < n {
        let vl = ctx.set_vl(n - i);
        let off = 8 * i as u64;
        let y = ctx.vload(mem, b.links + off, Stride::Unit, None)?;
        let t = ctx.valu(AluOp::FAdd, &y, spread, None)?;
        let t = ctx.valu(AluOp::FMul, &t, c.damping, None)?;
        let t = ctx.valu(AluOp::FAdd, &t, c.base, None)?;
        ctx.vstore(mem, b.rank_next + off, &t, Stride::Unit, None)?;
        let old = ctx.vload(mem, b.rank + off, Stride::Unit, None)?;
        let up = ctx.valu(AluOp::FSub, &t, &old, None)?;
        let down = ctx.valu(AluOp::FSub, &old, &t, None)?;
        let abs = ctx.valu(AluOp::FMax, &up, &down, None)?;
        diff = ctx.vreduce_ordered(ReduceOp::FSum, &abs, diff)?;
        i += vl;
        ctx.scalar_overhead(1);
    }
    Ok(diff)
}
