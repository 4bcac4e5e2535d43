use std::f64::consts::PI;

use super::spmv::{load_at, store_at};
use super::{ComplexSignal, KernelError, Variant};
use crate::machine::{AluOp, Scalar, Stride, VecValue, VectorContext};
use crate::memory::MemoryModel;

/// Split-layout complex buffer in simulated memory.
#[derive(Debug, Clone, Copy)]
struct Buf {
    re: u64,
    im: u64,
}

/// Forward DFT, `X[k] = sum_t x[t] e^(-2 pi i k t / n)`, by radix-2 Stockham
/// autosort.
///
/// Stage `m = 1, 2, 4, ..., n/2` computes, for every butterfly
/// `b < n/2` with `tw = b & !(m - 1)`:
///
/// ```text
/// y[b + tw]     = x[b] + x[b + n/2]
/// y[b + tw + m] = (x[b] - x[b + n/2]) * w^tw,   w = e^(-2 pi i / n)
/// ```
///
/// and then swaps `x` and `y`, so no bit-reversal pass is needed. Input
/// loads are unit-stride; the output permutation is a scatter. Both variants
/// use the same operation sequence (complex multiply as two products and a
/// sum, no fused multiply-add), so their results are identical.
pub fn fft(
    signal: &ComplexSignal,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
    variant: Variant,
) -> Result<ComplexSignal, KernelError> {
    let n = signal.len();
    let half = n / 2;
    let (tw_re, tw_im): (Vec<f64>, Vec<f64>) = (0..half)
        .map(|k| {
            let (s, c) = (-2.0 * PI * k as f64 / n as f64).sin_cos();
            (c, s)
        })
        .unzip();
    let w = Buf {
        re: mem.alloc_f64(&tw_re),
        im: mem.alloc_f64(&tw_im),
    };
    let mut x = Buf {
        re: mem.alloc_f64(signal.re()),
        im: mem.alloc_f64(signal.im()),
    };
    let mut y = Buf {
        re: mem.alloc_zeroed(n),
        im: mem.alloc_zeroed(n),
    };
    let mut m = 1;
    while m < n {
        match variant {
            Variant::Scalar => stage_scalar(n, m, x, y, w, ctx, mem)?,
            Variant::Vector => stage_vector(n, m, x, y, w, ctx, mem)?,
        }
        std::mem::swap(&mut x, &mut y);
        m *= 2;
        ctx.scalar_overhead(1);
    }
    ctx.fence();
    ComplexSignal::new(mem.read_f64s(x.re, n)?, mem.read_f64s(x.im, n)?)
}

fn stage_scalar(
    n: usize,
    m: usize,
    x: Buf,
    y: Buf,
    w: Buf,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<(), KernelError> {
    let half = (n / 2) as u64;
    let block = Scalar::u64(!(m as u64 - 1));
    for b in 0..half {
        let bs = Scalar::u64(b);
        let hi = Scalar::u64(b + half);
        let tw = ctx.scalar_op(AluOp::And, bs, block);
        let ar = load_at(ctx, mem, x.re, bs)?;
        let ai = load_at(ctx, mem, x.im, bs)?;
        let br = load_at(ctx, mem, x.re, hi)?;
        let bi = load_at(ctx, mem, x.im, hi)?;
        let wr = load_at(ctx, mem, w.re, tw)?;
        let wi = load_at(ctx, mem, w.im, tw)?;
        let sr = ctx.scalar_op(AluOp::FAdd, ar, br);
        let si = ctx.scalar_op(AluOp::FAdd, ai, bi);
        let dr = ctx.scalar_op(AluOp::FSub, ar, br);
        let di = ctx.scalar_op(AluOp::FSub, ai, bi);
        let rr = ctx.scalar_op(AluOp::FMul, dr, wr);
        let ii = ctx.scalar_op(AluOp::FMul, di, wi);
        let ri = ctx.scalar_op(AluOp::FMul, dr, wi);
        let ir = ctx.scalar_op(AluOp::FMul, di, wr);
        let pr = ctx.scalar_op(AluOp::FSub, rr, ii);
        let pi = ctx.scalar_op(AluOp::FAdd, ri, ir);
        let out = ctx.scalar_op(AluOp::Add, bs, tw);
        store_at(ctx, mem, y.re, out, sr)?;
        store_at(ctx, mem, y.im, out, si)?;
        store_at(ctx, mem, y.re + 8 * m as u64, out, pr)?;
        store_at(ctx, mem, y.im + 8 * m as u64, out, pi)?;
        ctx.scalar_overhead(1);
    }
    Ok(())
}

fn stage_vector(
    n: usize,
    m: usize,
    x: Buf,
    y: Buf,
    w: Buf,
    ctx: &mut VectorContext,
    mem: &mut MemoryModel,
) -> Result<(), KernelError> {
    let half = n / 2;
    let block = Scalar::u64(!(m as u64 - 1));
    let mut b0 = 0;
    while b0 < half {
        let vl = ctx.set_vl(half - b0);
        let lo = 8 * b0 as u64;
        let hi = 8 * (b0 + half) as u64;
        let ar = ctx.vload(mem, x.re + lo, Stride::Unit, None)?;
        let ai = ctx.vload(mem, x.im + lo, Stride::Unit, None)?;
        let br = ctx.vload(mem, x.re + hi, Stride::Unit, None)?;
        let bi = ctx.vload(mem, x.im + hi, Stride::Unit, None)?;
        let b = ctx.vid(b0 as u64);
        let tw = ctx.valu(AluOp::And, &b, block, None)?;
        let wr = ctx.vload(mem, w.re, Stride::Indexed(&tw), None)?;
        let wi = ctx.vload(mem, w.im, Stride::Indexed(&tw), None)?;
        let f = |ctx: &mut VectorContext, op, a: &VecValue, b: &VecValue| ctx.valu(op, a, b, None);
        let sr = f(ctx, AluOp::FAdd, &ar, &br)?;
        let si = f(ctx, AluOp::FAdd, &ai, &bi)?;
        let dr = f(ctx, AluOp::FSub, &ar, &br)?;
        let di = f(ctx, AluOp::FSub, &ai, &bi)?;
        let rr = f(ctx, AluOp::FMul, &dr, &wr)?;
        let ii = f(ctx, AluOp::FMul, &di, &wi)?;
        let ri = f(ctx, AluOp::FMul, &dr, &wi)?;
        let ir = f(ctx, AluOp::FMul, &di, &wr)?;
        let pr = f(ctx, AluOp::FSub, &rr, &ii)?;
        let pi = f(ctx, AluOp::FAdd, &ri, &ir)?;
        let out = f(ctx, AluOp::Add, &b, &tw)?;
        let hop = 8 * m as u64;
        ctx.vstore(mem, y.re, &sr, Stride::Indexed(&out), None)?;
        ctx.vstore(mem, y.im, &si, Stride::Indexed(&out), None)?;
        ctx.vstore(mem, y.re + hop, &pr, Stride::Indexed(&out), None)?;
        ctx.vstore(mem, y.im + hop, &pi, Stride::Indexed(&out), None)?;
        b0 += vl;
        ctx.scalar_overhead(1);
    }
    Ok(())
}
