use longvec_lab::machine::{AluOp, MachineConfig, MaskValue, ReduceOp, Scalar, Stride, VecValue, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel};
use proptest::prelude::*;

fn ctx() -> VectorContext {
    VectorContext::new(MachineConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn strip_mining_covers_every_element(n in 0usize..3000, vlmax in 1usize..=256) {
        let mut c = ctx();
        c.set_max_vl(vlmax).unwrap();
        c.record_vl_trace();
        let mut done = 0;
        while done < n {
            done += c.set_vl(n - done);
        }
        let trace = c.vl_trace().unwrap();
        prop_assert_eq!(trace.iter().sum::<usize>(), n);
        prop_assert!(trace.iter().rev().skip(1).all(|&v| v == vlmax));
        prop_assert_eq!(trace.len(), n.div_ceil(vlmax));
    }

    #[test]
    fn elementwise_matches_host(
        a in prop::collection::vec(-1e6f64..1e6, 1..=256),
        seed in any::<u64>(),
        masked in any::<bool>(),
    ) {
        let n = a.len();
        let b: Vec<f64> = (0..n).map(|i| ((seed >> (i % 64)) & 0xff) as f64 - 100.0).collect();
        let bits: Vec<bool> = (0..n).map(|i| (seed >> (i % 61)) & 1 == 1).collect();
        let mut c = ctx();
        c.set_vl(n);
        let mask = MaskValue::from_bools(bits.clone());
        let out = c
            .valu(AluOp::FMul, &VecValue::from_f64s(&a), &VecValue::from_f64s(&b), masked.then_some(&mask))
            .unwrap()
            .to_f64s();
        for i in 0..n {
            let want = if !masked || bits[i] { a[i] * b[i] } else { a[i] };
            prop_assert_eq!(out[i].to_bits(), want.to_bits());
        }
        let kept = c.vcompress(&VecValue::from_f64s(&a), &mask).unwrap().to_f64s();
        let want: Vec<f64> = a.iter().zip(&bits).filter(|(_, &m)| m).map(|(x, _)| *x).collect();
        prop_assert_eq!(kept, want);
        let sum = c.vreduce_ordered(ReduceOp::FSum, &VecValue::from_f64s(&a), Scalar::f64(0.5)).unwrap();
        prop_assert_eq!(sum.as_f64(), a.iter().fold(0.5, |acc, x| acc + x));
    }

    #[test]
    fn gather_and_scatter_match_host(
        data in prop::collection::vec(any::<i64>(), 1..500),
        idx_seed in prop::collection::vec(any::<u32>(), 1..=256),
    ) {
        let n = data.len();
        let idx: Vec<i64> = idx_seed.iter().map(|&s| (s as usize % n) as i64).collect();
        let mut c = ctx();
        let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
        let base = m.alloc_i64(&data);
        c.set_vl(idx.len());
        let iv = VecValue::from_i64s(&idx);
        let got = c.vload(&mut m, base, Stride::Indexed(&iv), None).unwrap().to_i64s();
        let want: Vec<i64> = idx.iter().map(|&i| data[i as usize]).collect();
        prop_assert_eq!(got, want);

        let vals: Vec<i64> = (0..idx.len() as i64).collect();
        c.vstore(&mut m, base, &VecValue::from_i64s(&vals), Stride::Indexed(&iv), None).unwrap();
        let mut host = data.clone();
        for (k, &i) in idx.iter().enumerate() {
            host[i as usize] = vals[k];
        }
        prop_assert_eq!(m.read_i64s(base, n).unwrap(), host);
    }

    #[test]
    fn cycles_are_monotone_in_latency(lo in 0u64..600, hi in 0u64..600, stride in 1u64..64) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let run = |extra| {
            let mut c = ctx();
            let mut m = MemoryModel::new(MemoryConfig::default().with_extra_latency(extra)).unwrap();
            let base = m.alloc_zeroed(1 << 14);
            c.set_vl(256);
            let mut acc = c.vsplat(Scalar::f64(0.0));
            for k in 0..16u64 {
                let idx = c.vid(k * 256);
                let idx = c.valu(AluOp::Mul, &idx, Scalar::u64(stride), None).unwrap();
                let idx = c.valu(AluOp::And, &idx, Scalar::u64((1 << 14) - 1), None).unwrap();
                let v = c.vload(&mut m, base, Stride::Indexed(&idx), None).unwrap();
                acc = c.valu(AluOp::FAdd, &acc, &v, None).unwrap();
            }
            c.vstore(&mut m, base, &acc, Stride::Unit, None).unwrap();
            c.fence()
        };
        let (a, b) = (run(lo), run(hi));
        prop_assert!(a <= b, "{} cycles at +{}, {} at +{}", a, lo, b, hi);
    }
}

#[test]
fn clock_only_moves_forward() {
    let mut c = ctx();
    let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
    let base = m.alloc_f64(&vec![1.0; 4096]);
    let mut last = c.cycle();
    for k in 0..16 {
        c.set_vl(256);
        let v = c.vload(&mut m, base + 2048 * k, Stride::Unit, None).unwrap();
        let s = c.vreduce(ReduceOp::FSum, &v).unwrap();
        c.wait_for(s);
        assert!(c.cycle() >= last);
        last = c.cycle();
    }
    assert!(c.fence() >= last);
}
