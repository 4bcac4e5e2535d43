use std::collections::VecDeque;

use super::spmv::{load_at, store_at};
use super::{Graph, KernelError};
use crate::machine::{AluOp, CmpOp, ReduceOp, Scalar, Stride, VecValue, VectorContext};
use crate::memory::MemoryModel;

const UNVISITED: i64 = -1;

struct PlacedGraph {
    offsets: u64,
    neighbors: u64,
    dist: u64,
}

fn place(g: &Graph, src: usize, mem: &mut MemoryModel) -> Result<PlacedGraph, KernelError> {
    if src >= g.n_nodes() {
        return Err(KernelError::SourceOutOfRange {
            src,
            n_nodes: g.n_nodes(),
        });
    }
    let as_u64 = |v: &[usize]| v.iter().map(|&i| i as u64).collect::<Vec<_>>();
    Ok(PlacedGraph {
        offsets: mem.alloc_u64(&as_u64(g.offsets())),
        neighbors: mem.alloc_u64(&as_u64(g.neighbor_array())),
        dist: mem.alloc_i64(&vec![UNVISITED; g.n_nodes()]),
    })
}

/// Queue-based top-down BFS on the scalar core. Returns hop counts from
/// `src`, `-1` for unreachable vertices.
pub fn bfs_scalar(
    g: &Graph,
    src: usize,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Vec<i64>, KernelError> {
    let p = place(g, src, mem)?;
    let queue = mem.alloc_zeroed(g.n_nodes());
    let src_s = Scalar::u64(src as u64);
    store_at(ctx, mem, p.dist, src_s, Scalar::i64(0))?;
    store_at(ctx, mem, queue, Scalar::u64(0), src_s)?;
    let (mut head, mut tail) = (0u64, 1u64);
    while head < tail {
        let u = load_at(ctx, mem, queue, Scalar::u64(head))?;
        let du = load_at(ctx, mem, p.dist, u)?;
        let next = ctx.scalar_op(AluOp::Add, du, Scalar::i64(1));
        let s = load_at(ctx, mem, p.offsets, u)?;
        let e = load_at(ctx, mem, p.offsets + 8, u)?;
        let mut j = s;
        for _ in s.as_u64()..e.as_u64() {
            let v = load_at(ctx, mem, p.neighbors, j)?;
            let dv = load_at(ctx, mem, p.dist, v)?;
            let fresh = ctx.scalar_cmp(CmpOp::Eq, dv, Scalar::i64(UNVISITED));
            if fresh.as_u64() == 1 {
                store_at(ctx, mem, p.dist, v, next)?;
                store_at(ctx, mem, queue, Scalar::u64(tail), v)?;
                tail += 1;
            }
            j = ctx.scalar_op(AluOp::Add, j, Scalar::u64(1));
            ctx.scalar_overhead(1);
        }
        head += 1;
        ctx.scalar_overhead(1);
    }
    ctx.fence();
    Ok(mem.read_i64s(p.dist, g.n_nodes())?)
}

/// Frontier strips whose neighbor ranges are gathered ahead of the one
/// being expanded.
const STRIPS_AHEAD: usize = 4;

/// One strip of vertices, masked to those on the current level.
struct Strip {
    vl: usize,
    start: VecValue,
    len: VecValue,
    longest: Scalar,
}

fn strip_bounds(
    p: &PlacedGraph,
    v0: usize,
    n: usize,
    level: i64,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Strip, KernelError> {
    let vl = ctx.set_vl(n - v0);
    let d = ctx.vload(mem, p.dist + 8 * v0 as u64, Stride::Unit, None)?;
    let on = ctx.vcmp(CmpOp::Eq, &d, Scalar::i64(level), None)?;
    let u = ctx.vid(v0 as u64);
    let start = ctx.vload(mem, p.offsets, Stride::Indexed(&u), Some(&on))?;
    let end = ctx.vload(mem, p.offsets + 8, Stride::Indexed(&u), Some(&on))?;
    let len = ctx.valu(AluOp::Sub, &end, &start, None)?;
    let longest = ctx.vreduce(ReduceOp::Max, &len)?;
    Ok(Strip {
        vl,
        start,
        len,
        longest,
    })
}

/// Level-synchronous top-down BFS on the vector unit.
///
/// Level `l` sweeps all vertices in strips. Vertices with `dist == l` form
/// the frontier (off-frontier lanes get an empty neighbor range); step `k`
/// gathers the `k`-th neighbor of every frontier lane still in range, gathers
/// those neighbors' distances and scatters `l + 1` to the unvisited ones.
/// Duplicate targets all write the same value, so no conflict resolution
/// is needed. The search ends with the first level that has no edges to
/// follow.
pub fn bfs_vector(
    g: &Graph,
    src: usize,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<Vec<i64>, KernelError> {
    let p = place(g, src, mem)?;
    let n = g.n_nodes();
    store_at(ctx, mem, p.dist, Scalar::u64(src as u64), Scalar::i64(0))?;

    let mut level = 0i64;
    loop {
        let mut steps = 0;
        let mut ahead = VecDeque::new();
        let mut v_next = 0;
        loop {
            while ahead.len() <= STRIPS_AHEAD && v_next < n {
                let s = strip_bounds(&p, v_next, n, level, ctx, mem)?;
                v_next += s.vl;
                ahead.push_back(s);
            }
            let Some(s) = ahead.pop_front() else { break };
            ctx.wait_for(s.longest);
            ctx.set_vl(s.vl);
            let level_v = ctx.vsplat(Scalar::i64(level + 1));
            for k in 0..s.longest.as_u64() {
                let m = ctx.vcmp(CmpOp::Gt, &s.len, Scalar::u64(k), None)?;
                let v = ctx.vload(mem, p.neighbors + 8 * k, Stride::Indexed(&s.start), Some(&m))?;
                let d = ctx.vload(mem, p.dist, Stride::Indexed(&v), Some(&m))?;
                let fresh = ctx.vcmp(CmpOp::Eq, &d, Scalar::i64(UNVISITED), Some(&m))?;
                ctx.vstore(mem, p.dist, &level_v, Stride::Indexed(&v), Some(&fresh))?;
                ctx.scalar_overhead(1);
            }
            steps += s.longest.as_u64();
            ctx.scalar_overhead(1);
        }
        if steps == 0 {
            break;
        }
        level += 1;
    }
    ctx.fence();
    Ok(mem.read_i64s(p.dist, n)?)
}
