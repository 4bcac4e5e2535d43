//! Indexed loads and stores: a permutation applied with one gather and
//! undone with one scatter, plus a masked compress of the even elements.

use longvec_lab::machine::{AluOp, CmpOp, MachineConfig, Scalar, Stride, VecValue, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let mut ctx = VectorContext::new(MachineConfig::default())?;
    let mut mem = MemoryModel::new(MemoryConfig::default())?;
    ctx.set_vl(n);

    let data: Vec<i64> = (0..n as i64).map(|i| i * i).collect();
    let perm: Vec<i64> = (0..n as i64).map(|i| (i * 37) % n as i64).collect();
    let src = mem.alloc_i64(&data);
    let dst = mem.alloc_zeroed(n);

    let idx = VecValue::from_i64s(&perm);
    let gathered = ctx.vload(&mut mem, src, Stride::Indexed(&idx), None)?;
    let expect: Vec<i64> = perm.iter().map(|&p| data[p as usize]).collect();
    assert_eq!(gathered.to_i64s(), expect);

    ctx.vstore(&mut mem, dst, &gathered, Stride::Indexed(&idx), None)?;
    let t_perm = ctx.fence();
    assert_eq!(mem.read_i64s(dst, n)?, data);
    println!("gather + scatter of {n} elements: {t_perm} cycles");

    let low = ctx.valu(AluOp::And, &gathered, Scalar::i64(1), None)?;
    let even = ctx.vcmp(CmpOp::Eq, &low, Scalar::i64(0), None)?;
    let packed = ctx.vcompress(&gathered, &even)?;
    let count = ctx.vpopcount(&even)?.as_u64() as usize;
    println!("even squares: {count}, first few {:?}", &packed.to_i64s()[..6]);
    println!("total cycles: {}", ctx.fence());
    Ok(())
}
