//! Strip-mined DAXPY (`y = a * x + y`) on the simulated vector unit, run at
//! several maximum vector lengths.

use longvec_lab::machine::{AluOp, MachineConfig, Scalar, Stride, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel, WORD};

type Outcome = (Vec<f64>, u64, Vec<usize>);

fn daxpy(n: usize, vlmax: usize) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut ctx = VectorContext::new(MachineConfig::default())?;
    ctx.set_max_vl(vlmax)?;
    ctx.record_vl_trace();
    let mut mem = MemoryModel::new(MemoryConfig::default())?;
    let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let xb = mem.alloc_f64(&x);
    let yb = mem.alloc_f64(&vec![1.0; n]);
    let a = Scalar::f64(2.0);

    let mut done = 0;
    while done < n {
        let vl = ctx.set_vl(n - done);
        let off = done as u64 * WORD;
        let xv = ctx.vload(&mut mem, xb + off, Stride::Unit, None)?;
        let yv = ctx.vload(&mut mem, yb + off, Stride::Unit, None)?;
        let ax = ctx.valu(AluOp::FMul, &xv, a, None)?;
        let sum = ctx.valu(AluOp::FAdd, &ax, &yv, None)?;
        ctx.vstore(&mut mem, yb + off, &sum, Stride::Unit, None)?;
        done += vl;
    }
    let cycles = ctx.fence();
    let trace = ctx.vl_trace().unwrap_or_default().to_vec();
    Ok((mem.read_f64s(yb, n)?, cycles, trace))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1000;
    println!("{:>6} {:>8} {:>6}  vl sequence", "vlmax", "cycles", "strips");
    for vlmax in [8, 16, 64, 256] {
        let (y, cycles, trace) = daxpy(n, vlmax)?;
        assert!(y.iter().enumerate().all(|(i, &v)| v == 2.0 * i as f64 + 1.0));
        let tail: Vec<String> = trace.iter().rev().take(3).rev().map(|v| v.to_string()).collect();
        println!("{vlmax:>6} {cycles:>8} {:>6}  ...{}", trace.len(), tail.join(","));
    }
    Ok(())
}
