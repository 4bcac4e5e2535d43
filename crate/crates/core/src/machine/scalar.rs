use std::cmp::Reverse;

use super::value::{AluOp, CmpOp, Scalar};
use super::{reserve_slot, MachineError, VectorContext};
use crate::memory::{Lookup, MemoryModel, RequestBatch, RequestKind};

const L1_LINE: u64 = 64;

impl VectorContext {
    /// Scalar ALU/FPU operation; starts once both inputs are ready.
    pub fn scalar_op(&mut self, op: AluOp, a: Scalar, b: Scalar) -> Scalar {
        let start = self.cycle.max(a.ready).max(b.ready);
        self.cycle = start + self.config.scalar_op_cycles;
        self.stats.scalar_ops += 1;
        Scalar {
            bits: op.apply(a.bits, b.bits),
            ready: self.cycle,
        }
    }

    /// Scalar compare producing 0 or 1.
    pub fn scalar_cmp(&mut self, op: CmpOp, a: Scalar, b: Scalar) -> Scalar {
        let start = self.cycle.max(a.ready).max(b.ready);
        self.cycle = start + self.config.scalar_op_cycles;
        self.stats.scalar_ops += 1;
        Scalar {
            bits: op.apply(a.bits, b.bits) as u64,
            ready: self.cycle,
        }
    }

    /// Address of element `index` of the array at `base`: one integer op,
    /// dependent on `index`.
    pub fn scalar_addr(&mut self, base: u64, index: Scalar) -> Scalar {
        let offset = Scalar {
            bits: index.bits.wrapping_mul(8),
            ready: index.ready,
        };
        self.scalar_op(AluOp::Add, Scalar::u64(base), offset)
    }

    /// Non-blocking scalar load. The returned value is ready when the data
    /// arrives; only consumers wait for it.
    pub fn scalar_load(&mut self, mem: &mut MemoryModel, addr: Scalar) -> Result<Scalar, MachineError> {
        let bits = mem.read_word(addr.bits)?;
        let mut start = self.cycle.max(addr.ready);
        let line = addr.bits & !(L1_LINE - 1);
        let l1_hit = match self.l1.as_mut().map(|l1| l1.lookup(line, false)) {
            Some(Lookup::Hit { ready }) => Some(ready),
            _ => None,
        };
        let ready = match l1_hit {
            Some(fill) => {
                self.stats.l1_hits += 1;
                (start + self.config.l1_hit_cycles).max(fill)
            }
            None => {
                if self.l1.is_some() {
                    self.stats.l1_misses += 1;
                }
                start = reserve_slot(&mut self.scalar_inflight, self.config.scalar_outstanding_misses, start);
                let batch = RequestBatch::from_addresses([addr.bits], mem.line_size(), RequestKind::Read, start);
                let done = mem.issue_requests(&batch);
                if let Some(l1) = self.l1.as_mut() {
                    l1.fill(line, done, false);
                }
                self.scalar_inflight.push(Reverse(done));
                done
            }
        };
        self.cycle = start + self.config.scalar_op_cycles;
        self.drain = self.drain.max(ready);
        self.stats.scalar_loads += 1;
        Ok(Scalar { bits, ready })
    }

    /// Posted scalar store: write-through to L2, no L1 allocation. Waits for
    /// the address only; the request leaves once the data is ready.
    pub fn scalar_store(&mut self, mem: &mut MemoryModel, addr: Scalar, value: Scalar) -> Result<(), MachineError> {
        mem.write_word(addr.bits, value.bits)?;
        let start = self.cycle.max(addr.ready);
        if let Some(l1) = self.l1.as_mut() {
            // refresh recency if present; data is always current in the backing store
            l1.lookup(addr.bits & !(L1_LINE - 1), false);
        }
        let batch =
            RequestBatch::from_addresses([addr.bits], mem.line_size(), RequestKind::Write, start.max(value.ready));
        let done = mem.issue_requests(&batch);
        self.cycle = start + self.config.scalar_op_cycles;
        self.drain = self.drain.max(done);
        self.stats.scalar_stores += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::MachineConfig;
    use super::*;
    use crate::machine::Stride;
    use crate::memory::MemoryConfig;

    #[test]
    fn scalar_add() {
        let mut c = VectorContext::new(MachineConfig::default()).unwrap();
        let before = c.cycle();
        let r = c.scalar_op(AluOp::Add, Scalar::i64(2), Scalar::i64(3));
        assert_eq!(r.as_i64(), 5);
        assert_eq!(c.cycle() - before, 1);
    }

    #[test]
    fn serialized_misses_with_single_outstanding() {
        let cfg = MachineConfig {
            scalar_outstanding_misses: 1,
            ..Default::default()
        };
        let mut c = VectorContext::new(cfg).unwrap();
        let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
        let base = m.alloc_zeroed(8 * 10);
        let before = c.cycle();
        for i in 0..10 {
            c.scalar_load(&mut m, Scalar::u64(base + i * 64)).unwrap();
        }
        c.fence();
        assert!(c.cycle() - before >= 500, "{}", c.cycle() - before);
        assert_eq!(c.cycle() - before, 10 * 60);
    }

    #[test]
    fn l2_hit_costs_hit_latency() {
        let mut c = VectorContext::new(MachineConfig::default()).unwrap();
        let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
        let base = m.alloc_f64(&[4.0; 8]);
        // warm the L2 through the vector port, which bypasses the scalar L1
        c.set_vl(8);
        c.vload(&mut m, base, Stride::Unit, None).unwrap();
        c.fence();
        let before = c.cycle();
        let v = c.scalar_load(&mut m, Scalar::u64(base)).unwrap();
        c.fence();
        assert_eq!(v.as_f64(), 4.0);
        assert_eq!(c.cycle() - before, 10);
    }

    #[test]
    fn l1_hit_after_fill() {
        let mut c = VectorContext::new(MachineConfig::default()).unwrap();
        let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
        let base = m.alloc_zeroed(8);
        let first = c.scalar_load(&mut m, Scalar::u64(base)).unwrap();
        c.fence();
        let t = c.cycle();
        let second = c.scalar_load(&mut m, Scalar::u64(base + 8)).unwrap();
        assert_eq!(first.ready(), 60);
        assert_eq!(second.ready(), t + 2);
        assert_eq!(c.stats().l1_hits, 1);
    }

    #[test]
    fn two_outstanding_misses_overlap() {
        let mut c = VectorContext::new(MachineConfig::default()).unwrap();
        let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
        let base = m.alloc_zeroed(8 * 4);
        for i in 0..4 {
            c.scalar_load(&mut m, Scalar::u64(base + i * 64)).unwrap();
        }
        c.fence();
        // pairs overlap: two round trips plus one issue cycle each
        assert!(c.cycle() < 4 * 60);
        assert!(c.cycle() >= 2 * 60);
    }

    #[test]
    fn dependent_load_waits_for_address() {
        let mut c = VectorContext::new(MachineConfig::default()).unwrap();
        let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
        let table = m.alloc_i64(&[0; 64]);
        let idx = m.alloc_i64(&[16]);
        let i = c.scalar_load(&mut m, Scalar::u64(idx)).unwrap();
        let a = c.scalar_addr(table, i);
        let v = c.scalar_load(&mut m, a).unwrap();
        assert!(v.ready() >= i.ready() + 60);
    }

    #[test]
    fn out_of_bounds_scalar() {
        let mut c = VectorContext::new(MachineConfig::default()).unwrap();
        let mut m = MemoryModel::new(MemoryConfig::default()).unwrap();
        m.alloc_zeroed(8);
        assert!(c.scalar_load(&mut m, Scalar::u64(1 << 30)).is_err());
        assert!(c.scalar_store(&mut m, Scalar::u64(1 << 30), Scalar::u64(0)).is_err());
    }
}
