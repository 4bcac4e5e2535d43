use std::collections::VecDeque;

use super::{CsrMatrix, KernelError};
use crate::machine::{AluOp, CmpOp, ReduceOp, Scalar, Stride, VecValue, VectorContext};
use crate::memory::MemoryModel;

/// How the vector SpMV maps rows onto vector elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpmvStrategy {
    /// One row at a time, strip-mined over the row's nonzeros: gather `x`,
    /// multiply, ordered reduction into the row's sum.
    #[default]
    RowWise,
    /// `vl` rows at a time: step `k` gathers the `k`-th nonzero of every row
    /// in the strip under a `k < row length` mask and accumulates per
    /// element. Short rows still fill whole vectors.
    RowBlock,
}

/// A CSR matrix copied into simulated memory.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlacedCsr {
    pub n_rows: usize,
    pub row_ptr: u64,
    pub col_idx: u64,
    pub values: u64,
}

impl PlacedCsr {
    pub fn place(a: &CsrMatrix, mem: &mut MemoryModel) -> Self {
        let as_u64 = |v: &[usize]| v.iter().map(|&i| i as u64).collect::<Vec<_>>();
        Self {
            n_rows: a.n_rows(),
            row_ptr: mem.alloc_u64(&as_u64(a.row_ptr())),
            col_idx: mem.alloc_u64(&as_u64(a.col_idx())),
            values: mem.alloc_f64(a.values()),
        }
    }
}

/// Loads the 8-byte element `base[index]`.
pub(crate) fn load_at(
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
    base: u64,
    index: Scalar,
) -> Result<Scalar, KernelError> {
    let addr = ctx.scalar_addr(base, index);
    Ok(ctx.scalar_load(mem, addr)?)
}

pub(crate) fn store_at(
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
    base: u64,
    index: Scalar,
    value: Scalar,
) -> Result<(), KernelError> {
    let addr = ctx.scalar_addr(base, index);
    Ok(ctx.scalar_store(mem, addr, value)?)
}

/// `y = A x` with `A`, `x` and `y` already in memory. `None` runs the scalar
/// loop.
pub(crate) fn spmv_placed(
    a: &PlacedCsr,
    x: u64,
    y: u64,
    strategy: Option<SpmvStrategy>,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<(), KernelError> {
    match strategy {
        None => scalar_rows(a, x, y, ctx, mem),
        Some(SpmvStrategy::RowWise) => row_wise(a, x, y, ctx, mem),
        Some(SpmvStrategy::RowBlock) => row_block(a, x, y, ctx, mem),
    }
}

fn scalar_rows(
    a: &PlacedCsr,
    x: u64,
    y: u64,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<(), KernelError> {
    let mut start = ctx.scalar_load(mem, Scalar::u64(a.row_ptr))?;
    for r in 0..a.n_rows as u64 {
        let end = load_at(ctx, mem, a.row_ptr, Scalar::u64(r + 1))?;
        let mut acc = Scalar::f64(0.0);
        let mut j = start;
        for _ in start.as_u64()..end.as_u64() {
            let c = load_at(ctx, mem, a.col_idx, j)?;
            let v = load_at(ctx, mem, a.values, j)?;
            let xv = load_at(ctx, mem, x, c)?;
            let p = ctx.scalar_op(AluOp::FMul, v, xv);
            acc = ctx.scalar_op(AluOp::FAdd, acc, p);
            j = ctx.scalar_op(AluOp::Add, j, Scalar::u64(1));
            ctx.scalar_overhead(1);
        }
        store_at(ctx, mem, y, Scalar::u64(r), acc)?;
        ctx.scalar_overhead(1);
        start = end;
    }
    Ok(())
}

fn row_wise(a: &PlacedCsr, x: u64, y: u64, ctx: &mut VectorContext, mem: &mut MemoryModel) -> Result<(), KernelError> {
    let mut start = ctx.scalar_load(mem, Scalar::u64(a.row_ptr))?;
    for r in 0..a.n_rows as u64 {
        let end = load_at(ctx, mem, a.row_ptr, Scalar::u64(r + 1))?;
        // the row bounds feed set_vl and the unit-stride base addresses
        ctx.wait_for(start);
        ctx.wait_for(end);
        let (mut j, e) = (start.as_u64(), end.as_u64());
        let mut acc = Scalar::f64(0.0);
        while j < e {
            let vl = ctx.set_vl((e - j) as usize);
            let c = ctx.vload(mem, a.col_idx + 8 * j, Stride::Unit, None)?;
            let v = ctx.vload(mem, a.values + 8 * j, Stride::Unit, None)?;
            let xv = ctx.vload(mem, x, Stride::Indexed(&c), None)?;
            let p = ctx.valu(AluOp::FMul, &v, &xv, None)?;
            acc = ctx.vreduce_ordered(ReduceOp::FSum, &p, acc)?;
            j += vl as u64;
            ctx.scalar_overhead(1);
        }
        store_at(ctx, mem, y, Scalar::u64(r), acc)?;
        ctx.scalar_overhead(1);
        start = end;
    }
    Ok(())
}

/// Row bounds of one block of `vl` rows and its longest row length.
struct Block {
    r0: usize,
    vl: usize,
    start: VecValue,
    len: VecValue,
    longest: Scalar,
}

fn block_bounds(
    a: &PlacedCsr,
    r0: usize,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Block, KernelError> {
    let vl = ctx.set_vl(a.n_rows - r0);
    let start = ctx.vload(mem, a.row_ptr + 8 * r0 as u64, Stride::Unit, None)?;
    let end = ctx.vload(mem, a.row_ptr + 8 * (r0 as u64 + 1), Stride::Unit, None)?;
    let len = ctx.valu(AluOp::Sub, &end, &start, None)?;
    let longest = ctx.vreduce(ReduceOp::Max, &len)?;
    Ok(Block {
        r0,
        vl,
        start,
        len,
        longest,
    })
}

/// Blocks whose bounds are loaded ahead of the one being computed.
const BOUNDS_AHEAD: usize = 16;

// Bounds run BOUNDS_AHEAD blocks ahead of the arithmetic so each block's
// trip count is known by the time the loop reaches it.
fn row_block(a: &PlacedCsr, x: u64, y: u64, ctx: &mut VectorContext, mem: &mut MemoryModel) -> Result<(), KernelError> {
    let mut ahead = VecDeque::new();
    let mut r_next = 0;
    loop {
        while ahead.len() <= BOUNDS_AHEAD && r_next < a.n_rows {
            let b = block_bounds(a, r_next, ctx, mem)?;
            r_next += b.vl;
            ahead.push_back(b);
        }
        let Some(b) = ahead.pop_front() else { break };
        ctx.wait_for(b.longest);
        ctx.set_vl(b.vl);
        let mut acc = ctx.vsplat(Scalar::f64(0.0));
        for k in 0..b.longest.as_u64() {
            // element k of each row sits at index start + k
            let m = ctx.vcmp(CmpOp::Gt, &b.len, Scalar::u64(k), None)?;
            let c = ctx.vload(mem, a.col_idx + 8 * k, Stride::Indexed(&b.start), Some(&m))?;
            let v = ctx.vload(mem, a.values + 8 * k, Stride::Indexed(&b.start), Some(&m))?;
            let xv = ctx.vload(mem, x, Stride::Indexed(&c), Some(&m))?;
            let p = ctx.valu(AluOp::FMul, &v, &xv, Some(&m))?;
            acc = ctx.valu(AluOp::FAdd, &acc, &p, Some(&m))?;
            ctx.scalar_overhead(1);
        }
        ctx.vstore(mem, y + 8 * b.r0 as u64, &acc, Stride::Unit, None)?;
        ctx.scalar_overhead(1);
    }
    Ok(())
}

fn run(
    a: &CsrMatrix,
    x: &[f64],
    strategy: Option<SpmvStrategy>,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Vec<f64>, KernelError> {
    if x.len() != a.n_cols() {
        return Err(KernelError::DimensionMismatch {
            expected: a.n_cols(),
            found: x.len(),
        });
    }
    let placed = PlacedCsr::place(a, mem);
    let xb = mem.alloc_f64(x);
    let yb = mem.alloc_zeroed(a.n_rows());
    spmv_placed(&placed, xb, yb, strategy, ctx, mem)?;
    ctx.fence();
    Ok(mem.read_f64s(yb, a.n_rows())?)
}

/// Sparse matrix-vector product on the scalar core.
pub fn spmv_scalar(
    a: &CsrMatrix,
    x: &[f64],
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Vec<f64>, KernelError> {
    run(a, x, None, ctx, mem)
}

/// Row-wise vector SpMV ([`SpmvStrategy::RowWise`]).
pub fn spmv_vector(
    a: &CsrMatrix,
    x: &[f64],
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Vec<f64>, KernelError> {
    run(a, x, Some(SpmvStrategy::RowWise), ctx, mem)
}

pub fn spmv_vector_with(
    strategy: SpmvStrategy,
    a: &CsrMatrix,
    x: &[f64],
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Vec<f64>, KernelError> {
    run(a, x, Some(strategy), ctx, mem)
}
